mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use roughmetric::io::{self, LoadError, SpaceSource};
use roughmetric::{ControlledSpace, Error, FuzzConfig, DEFAULT_TOLERANCE};

/// Overrides the boundary tolerance used by every `<=` comparison.
const TOLERANCE_ENV: &str = "ROUGHMETRIC_TOLERANCE";

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "roughmetric", version, about = "Controlled metric type spaces and rough limit sets")]
#[command(after_help = "SPACE is a TOML space document or `paper-example N`.\n\
    The tolerance defaults to 1e-9 and can be overridden with ROUGHMETRIC_TOLERANCE.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// TOML
    Structured,
}

#[derive(Args)]
struct SpaceArgs {
    /// Space document path, or `paper-example N`
    #[arg(value_name = "SPACE", num_args = 1..=2, required = true)]
    space: Vec<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl SpaceArgs {
    fn source(&self) -> String {
        self.space.join(" ")
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the controlled metric axioms exhaustively
    Validate {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Report k, limsup distances, convergence, cluster points and LIM^r
    Analyze {
        #[command(flatten)]
        space: SpaceArgs,
        /// Sequence literal, e.g. "prefix = [7], cycle = [2, 3]"
        #[arg(long)]
        seq: String,
        /// Comma-separated roughness degrees; expressions like 1/sqrt(2) allowed
        #[arg(long, allow_hyphen_values = true)]
        r: Option<String>,
    },
    /// Print LIM^r for one roughness degree
    Limset {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        seq: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
    },
    /// Run every theorem check over a roughness grid
    Theorems {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        seq: String,
        /// Defaults to {0, r*/2, r*, (r*+D)/2, D, 2D}
        #[arg(long, allow_hyphen_values = true)]
        r_grid: Option<String>,
    },
    /// Run the theorem checks on random valid spaces
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 12)]
        max_points: usize,
        #[arg(long, default_value_t = 4)]
        max_cycle: usize,
        #[arg(long, default_value_t = 3)]
        max_prefix: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, allow_hyphen_values = true)]
        r_grid: Option<String>,
        /// Run trials on the calling thread only
        #[arg(long)]
        sequential: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Print a space as a normalized TOML document
    Emit {
        #[arg(value_name = "SPACE", num_args = 1..=2, required = true)]
        space: Vec<String>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Violation(String),
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Space(e) => e.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Axioms(v) => CliError::Violation(
                v.iter().map(|v| format!("violation: {v}")).collect::<Vec<_>>().join("\n"),
            ),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn tolerance() -> Result<f64, CliError> {
    match std::env::var(TOLERANCE_ENV) {
        Err(_) => Ok(DEFAULT_TOLERANCE),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
            _ => Err(CliError::Usage(format!("{TOLERANCE_ENV} must be a non-negative number, got `{s}`"))),
        },
    }
}

fn load(arg: &str) -> Result<ControlledSpace, CliError> {
    let spec = SpaceSource::parse(arg)?.load()?;
    Ok(ControlledSpace::with_tolerance(spec, tolerance()?)?)
}

fn single_real(s: &str) -> Result<f64, CliError> {
    match io::parse_real_list(s)?.as_slice() {
        [r] => Ok(*r),
        _ => Err(CliError::Usage(format!("expected one roughness degree, got `{s}`"))),
    }
}

/// Output text plus exit status.
fn run(cli: Cli) -> Result<(String, u8), CliError> {
    match cli.command {
        Command::Validate { space } => {
            let spec = SpaceSource::parse(&space.source())?.load()?;
            let tol = tolerance()?;
            let result = roughmetric::validate_axioms_with(&spec, tol, Default::default());
            let status = if result.is_valid() { EXIT_OK } else { EXIT_VIOLATION };
            Ok((report::validation(&spec, &result, structured(space.format, false))?, status))
        }
        Command::Analyze { space: args, seq, r } => {
            let space = load(&args.source())?;
            let seq = io::parse_sequence(&seq, &space)?;
            let rs = r.as_deref().map(io::parse_real_list).transpose()?.unwrap_or_default();
            let out = report::analysis(&args.source(), &space, &seq, &rs, structured(args.format, false))?;
            Ok((out, EXIT_OK))
        }
        Command::Limset { space: args, seq, r } => {
            let space = load(&args.source())?;
            let seq = io::parse_sequence(&seq, &space)?;
            let r = single_real(&r)?;
            Ok((report::limit_set(&space, &seq, r, structured(args.format, false))?, EXIT_OK))
        }
        Command::Theorems { space: args, seq, r_grid } => {
            let space = load(&args.source())?;
            let seq = io::parse_sequence(&seq, &space)?;
            let grid = match r_grid {
                Some(g) => io::parse_real_list(&g)?,
                None => roughmetric::theorems::default_r_grid(&space, &seq)?,
            };
            let reports = roughmetric::run_all(&space, &seq, &grid)?;
            let status = if reports.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_VIOLATION };
            Ok((report::theorems(&space, &reports, structured(args.format, false))?, status))
        }
        Command::Fuzz { trials, max_points, max_cycle, max_prefix, seed, r_grid, sequential, format } => {
            let config = FuzzConfig {
                trials,
                max_points,
                max_cycle,
                max_prefix,
                seed,
                r_grid: r_grid.as_deref().map(io::parse_real_list).transpose()?,
            };
            let exec = if sequential {
                roughmetric::Execution::Sequential
            } else {
                roughmetric::Execution::default()
            };
            let summary = roughmetric::fuzz_with(&config, exec)?;
            let status = if summary.passed() { EXIT_OK } else { EXIT_VIOLATION };
            Ok((report::fuzz(&summary, structured(format, true))?, status))
        }
        Command::Emit { space } => {
            let spec = SpaceSource::parse(&space.join(" "))?.load()?;
            Ok((io::emit_space(&spec), EXIT_OK))
        }
    }
}

fn structured(format: Option<Format>, default: bool) -> bool {
    format.map_or(default, |f| f == Format::Structured)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, status)) => {
            print!("{out}");
            ExitCode::from(status)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Violation(msg)) => {
            eprintln!("space is not a controlled metric type space");
            eprintln!("{msg}");
            ExitCode::from(EXIT_VIOLATION)
        }
    }
}
