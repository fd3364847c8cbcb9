//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.
//!
//! ```text
//! cargo test -p roughmetric --test acceptance
//! ```

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use roughmetric::io::emit_report;
use roughmetric::theorems::fuzz::trial_rng;
use roughmetric::theorems::gen;
use roughmetric::{
    fuzz, fuzz_with, is_rough_limit, paper_example, paper_example_spec, rough_limit_set,
    validate_axioms, ControlledSpace, EpSequence, Execution, FuzzConfig, Point, PointSet,
};

/// Boundary tolerance for membership comparisons.
const TAU: f64 = 1e-9;
const AXIOM_BUDGET: Duration = Duration::from_secs(5);
const FUZZ_BUDGET: Duration = Duration::from_secs(60);
const FUZZ_TRIALS: usize = 10_000;
const FUZZ_MAX_POINTS: usize = 12;
const ORACLE_SPECS: usize = 200;
const ORACLE_MAX_POINTS: usize = 6;
const ORACLE_MAX_PREFIX: usize = 2;
const ORACLE_MAX_CYCLE: usize = 3;
const ORACLE_EPSILONS: [f64; 3] = [1e-1, 1e-3, 1e-6];
const DEGENERATION_SAMPLES: usize = 100;
const RATIO_CEILING: f64 = 1.0 + 1e-9;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Outcome + 'a>);

fn main() -> ExitCode {
    assert_eq!(TAU, roughmetric::DEFAULT_TOLERANCE);

    let fuzz_config = FuzzConfig {
        trials: FUZZ_TRIALS,
        max_points: FUZZ_MAX_POINTS,
        seed: 20_240_601,
        ..FuzzConfig::default()
    };
    let started = Instant::now();
    let summary = fuzz(&fuzz_config).expect("fuzz config is valid");
    let fuzz_time = started.elapsed();

    let criteria: Vec<Criterion<'_>> = vec![
        ("1 axiom reproduction on example spaces N=2..=50", Box::new(axiom_reproduction)),
        ("2 golden rough limit sets", Box::new(golden_limit_sets)),
        ("3 non-convergence of 2,3,2,3,...", Box::new(non_convergence)),
        ("4 definitional-oracle equivalence", Box::new(oracle_equivalence)),
        (
            "5 theorem fuzz suite",
            Box::new(|| {
                if !summary.passed() {
                    let first = summary.failures.first().map(|f| format!("{:?}", f.report));
                    return Err(format!(
                        "{} failures, {} trial errors; first: {first:?} {:?}",
                        summary.failures_total,
                        summary.errors.len(),
                        summary.errors.first()
                    ));
                }
                if fuzz_time >= FUZZ_BUDGET {
                    return Err(format!("took {fuzz_time:?}, budget {FUZZ_BUDGET:?}"));
                }
                let per: Vec<String> = summary
                    .theorems
                    .iter()
                    .map(|(id, c)| format!("{id}={}/{}", c.held, c.checked))
                    .collect();
                Ok(format!(
                    "{} trials, {} checks, 0 failures in {fuzz_time:.2?} (held/checked: {})",
                    summary.trials,
                    summary.checks,
                    per.join(" ")
                ))
            }),
        ),
        ("6 r = 0 degeneration", Box::new(zero_roughness)),
        (
            "7 diameter-bound sharpness log",
            Box::new(|| match summary.diameter_ratio.max {
                None => Err("no instance with r > 0 and nonempty LIM^r".into()),
                Some(q) if q <= RATIO_CEILING => Ok(format!(
                    "max diam(LIM^r)/(2rk) = {q:.6} over {} samples (attainment not asserted)",
                    summary.diameter_ratio.samples
                )),
                Some(q) => Err(format!("ratio {q} exceeds {RATIO_CEILING}")),
            }),
        ),
        ("8 reproducibility", Box::new(reproducibility)),
    ];

    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}

fn axiom_reproduction() -> Outcome {
    let started = Instant::now();
    let mut triples = 0usize;
    for n in 2..=50 {
        let spec = paper_example_spec(n).map_err(|e| e.to_string())?;
        let result = validate_axioms(&spec);
        if !result.is_valid() {
            return Err(format!("N={n}: {}", result.violations()[0]));
        }
        triples += n * n * n;
    }
    let elapsed = started.elapsed();
    if elapsed >= AXIOM_BUDGET {
        return Err(format!("took {elapsed:?}, budget {AXIOM_BUDGET:?}"));
    }
    Ok(format!("49 spaces valid, {triples} triples checked in {elapsed:.2?}"))
}

fn label_set(space: &ControlledSpace, labels: impl IntoIterator<Item = usize>) -> PointSet {
    labels.into_iter().map(|l| space.point(&l.to_string()).unwrap()).collect()
}

fn xi(space: &ControlledSpace) -> EpSequence {
    EpSequence::periodic(vec![space.point("2").unwrap(), space.point("3").unwrap()]).unwrap()
}

fn golden_limit_sets() -> Outcome {
    let space = paper_example(10).map_err(|e| e.to_string())?;
    if space.tolerance() != TAU {
        return Err(format!("space tolerance {} != {TAU}", space.tolerance()));
    }
    let seq = xi(&space);
    let r = 1.0 / 2f64.sqrt();
    let small = rough_limit_set(&seq, &space, r).map_err(|e| e.to_string())?;
    let big = rough_limit_set(&seq, &space, 1.0).map_err(|e| e.to_string())?;
    if small.members != label_set(&space, [2, 3]) {
        return Err(format!("LIM^(1/sqrt 2) = {:?}", small.members));
    }
    if big.members != label_set(&space, 1..=10) {
        return Err(format!("LIM^1 = {:?}", big.members));
    }
    Ok("LIM^{1/sqrt(2)} = {2,3}, LIM^1 = {1..10}".into())
}

fn non_convergence() -> Outcome {
    let space = paper_example(10).map_err(|e| e.to_string())?;
    let seq = xi(&space);
    match (seq.is_convergent(), seq.is_cauchy()) {
        (None, false) => Ok("is_convergent = none, is_cauchy = false".into()),
        other => Err(format!("got {other:?}")),
    }
}

/// Every `(prefix, cycle)` with the given length limits over `n` points.
fn all_sequences(n: usize, max_prefix: usize, max_cycle: usize) -> Vec<EpSequence> {
    fn words(n: usize, len: usize) -> Vec<Vec<Point>> {
        (0..len).fold(vec![vec![]], |acc, _| {
            acc.into_iter()
                .flat_map(|w| {
                    (0..n).map(move |p| {
                        let mut w = w.clone();
                        w.push(Point(p));
                        w
                    })
                })
                .collect()
        })
    }
    let prefixes: Vec<Vec<Point>> = (0..=max_prefix).flat_map(|l| words(n, l)).collect();
    let cycles: Vec<Vec<Point>> = (1..=max_cycle).flat_map(|l| words(n, l)).collect();
    prefixes
        .iter()
        .flat_map(|p| cycles.iter().map(move |c| EpSequence::new(p.clone(), c.clone()).unwrap()))
        .collect()
}

/// Literal rough-convergence check: for each ε there is an `n0` with
/// `d(x_n, x) < r + ε` for every `n ≥ n0` up to `prefix + 4·cycle`.
fn definitional_rough_limit(space: &ControlledSpace, seq: &EpSequence, x: Point, r: f64) -> bool {
    let horizon = seq.prefix().len() + 4 * seq.cycle().len();
    let term = |n: usize| seq.eval(n).unwrap();
    ORACLE_EPSILONS.iter().all(|&eps| {
        (1..=seq.prefix().len() + 1)
            .any(|n0| (n0..=horizon).all(|n| space.dist(term(n), x) < r + eps))
    })
}

/// `0`, half the smallest distance, four distance quantiles (exact boundary
/// values), the mid-range and twice the largest distance.
fn probe_grid(space: &ControlledSpace) -> Vec<f64> {
    let mut ds: Vec<f64> = space
        .points()
        .flat_map(|x| space.points().map(move |y| (x, y)))
        .filter(|(x, y)| x < y)
        .map(|(x, y)| space.dist(x, y))
        .collect();
    if ds.is_empty() {
        return vec![0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
    }
    ds.sort_by(f64::total_cmp);
    let q = |f: f64| ds[((ds.len() - 1) as f64 * f).round() as usize];
    let (lo, hi) = (ds[0], ds[ds.len() - 1]);
    vec![0.0, lo / 2.0, q(0.0), q(1.0 / 3.0), q(2.0 / 3.0), q(1.0), (lo + hi) / 2.0, 2.0 * hi]
}

fn oracle_equivalence() -> Outcome {
    let per_spec = Execution::default().map_range(ORACLE_SPECS, |i| {
        let mut rng = trial_rng(0x0_5eed, i);
        let spec = gen::random_spec(&mut rng, ORACLE_MAX_POINTS);
        let space = ControlledSpace::new(spec).map_err(|e| format!("spec {i}: {e}"))?;
        let grid = probe_grid(&space);
        let mut cases = 0usize;
        for seq in all_sequences(space.len(), ORACLE_MAX_PREFIX, ORACLE_MAX_CYCLE) {
            for x in space.points() {
                for &r in &grid {
                    cases += 1;
                    let fast = is_rough_limit(&seq, &space, x, r).map_err(|e| e.to_string())?;
                    if fast != definitional_rough_limit(&space, &seq, x, r) {
                        return Err(format!("spec {i}: seq {seq:?}, x {x}, r {r}: fast = {fast}"));
                    }
                }
            }
        }
        Ok(cases)
    });
    let mut total = 0;
    for r in per_spec {
        total += r?;
    }
    Ok(format!("{ORACLE_SPECS} spaces, {total} (seq, x, r) cases, 100% agreement"))
}

fn zero_roughness() -> Outcome {
    let mut checked = (0, 0);
    for i in 0..DEGENERATION_SAMPLES {
        let mut rng = trial_rng(0xdead, i);
        let n = rng.random_range(2..=FUZZ_MAX_POINTS);
        let spec = gen::constructive_spec(&mut rng, n, gen::DistanceRegime::Moderate, true);
        let space = ControlledSpace::new(spec).map_err(|e| e.to_string())?;

        let conv = gen::random_convergent(&mut rng, n, 3);
        let limit = conv.is_convergent().expect("generated convergent");
        let lim = rough_limit_set(&conv, &space, 0.0).map_err(|e| e.to_string())?;
        if lim.members != PointSet::from([limit]) {
            return Err(format!("convergent {conv:?}: LIM^0 = {:?}", lim.members));
        }
        checked.0 += 1;

        let wild = gen::random_nonconvergent(&mut rng, n, 3, 4);
        let lim = rough_limit_set(&wild, &space, 0.0).map_err(|e| e.to_string())?;
        if !lim.is_empty() {
            return Err(format!("non-convergent {wild:?}: LIM^0 = {:?}", lim.members));
        }
        checked.1 += 1;
    }
    Ok(format!(
        "{} convergent -> {{limit}}, {} non-convergent -> empty",
        checked.0, checked.1
    ))
}

fn reproducibility() -> Outcome {
    let config = FuzzConfig { trials: 2000, seed: 99, ..FuzzConfig::default() };
    let render = |exec| emit_report(&fuzz_with(&config, exec).unwrap()).unwrap();
    let a = render(Execution::default());
    let b = render(Execution::default());
    let c = render(Execution::Sequential);
    if a != b {
        return Err("two runs with the same seed differ".into());
    }
    if a != c {
        return Err("sequential run differs from default execution".into());
    }
    Ok(format!("{} trials, {} bytes, byte-identical across 3 runs", config.trials, a.len()))
}
