//! Text and TOML renderings for each subcommand. Points are shown by label.

use std::fmt::Write;

use serde::Serialize;

use roughmetric::io::{emit_report, format_real};
use roughmetric::theorems::Aux;
use roughmetric::{
    cluster_points, critical_roughness, rough_limit_set, ControlledSpace, EpSequence, FuzzSummary,
    Point, SpaceSpec, TheoremReport, ValidationResult, Verdict, Violation,
};

use crate::CliError;

type Rendered = Result<String, CliError>;

fn toml_out<T: Serialize>(value: &T) -> Rendered {
    emit_report(value).map_err(|e| CliError::Usage(format!("cannot render report: {e}")))
}

/// Rounds to the 12 significant digits used everywhere in output.
fn real(x: f64) -> f64 {
    format_real(x).parse().unwrap_or(x)
}

fn labels(space: &ControlledSpace, pts: impl IntoIterator<Item = Point>) -> Vec<String> {
    pts.into_iter().map(|p| space.label(p).to_string()).collect()
}

fn list_text(space: &ControlledSpace, pts: &[Point]) -> String {
    format!("[{}]", labels(space, pts.iter().copied()).join(", "))
}

#[derive(Serialize)]
struct SeqView {
    prefix: Vec<String>,
    cycle: Vec<String>,
}

impl SeqView {
    fn new(space: &ControlledSpace, seq: &EpSequence) -> Self {
        SeqView {
            prefix: labels(space, seq.prefix().iter().copied()),
            cycle: labels(space, seq.cycle().iter().copied()),
        }
    }
}

fn seq_text(space: &ControlledSpace, seq: &EpSequence) -> String {
    format!("prefix = {}, cycle = {}", list_text(space, seq.prefix()), list_text(space, seq.cycle()))
}

// ---- validate ----

#[derive(Serialize)]
struct ViolationView {
    axiom: &'static str,
    points: Vec<String>,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rhs: Option<f64>,
}

fn violation_view(spec: &SpaceSpec, v: &Violation) -> ViolationView {
    let l = |p: &Point| spec.labels()[p.0].as_str();
    let f = |x: f64| format_real(x);
    let (axiom, points, message, lhs, rhs) = match v {
        Violation::SelfDistance { x, distance } => (
            "d1",
            vec![x],
            format!("d({0},{0}) = {1} but must be 0", l(x), f(*distance)),
            Some(*distance),
            Some(0.0),
        ),
        Violation::ZeroDistance { x, y } => (
            "d1",
            vec![x, y],
            format!("d({},{}) = 0 for distinct points", l(x), l(y)),
            None,
            None,
        ),
        Violation::Asymmetric { x, y, forward, backward } => (
            "d2",
            vec![x, y],
            format!("d({0},{1}) = {2} but d({1},{0}) = {3}", l(x), l(y), f(*forward), f(*backward)),
            Some(*forward),
            Some(*backward),
        ),
        Violation::ControlBelowOne { x, y, alpha } => (
            "alpha",
            vec![x, y],
            format!("alpha({},{}) = {} < 1", l(x), l(y), f(*alpha)),
            Some(*alpha),
            Some(1.0),
        ),
        Violation::Triangle { x, y, z, lhs, rhs } => (
            "d3",
            vec![x, y, z],
            format!(
                "d({x},{y}) = {} > alpha({x},{z})d({x},{z}) + alpha({z},{y})d({z},{y}) = {}",
                f(*lhs),
                f(*rhs),
                x = l(x),
                y = l(y),
                z = l(z)
            ),
            Some(*lhs),
            Some(*rhs),
        ),
    };
    ViolationView {
        axiom,
        points: points.into_iter().map(|p| l(p).to_string()).collect(),
        message,
        lhs: lhs.map(real),
        rhs: rhs.map(real),
    }
}

#[derive(Serialize)]
struct ValidationView {
    valid: bool,
    points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<f64>,
    violations: Vec<ViolationView>,
}

pub fn validation(spec: &SpaceSpec, result: &ValidationResult, structured: bool) -> Rendered {
    let k = result.is_valid().then(|| {
        real(spec.alpha_table().iter().flatten().copied().fold(1.0, f64::max))
    });
    let view = ValidationView {
        valid: result.is_valid(),
        points: spec.len(),
        k,
        violations: result.violations().iter().map(|v| violation_view(spec, v)).collect(),
    };
    if structured {
        return toml_out(&view);
    }
    let mut out = String::new();
    match view.k {
        Some(k) => {
            let _ = writeln!(out, "valid: {} points, k = {}", view.points, format_real(k));
        }
        None => {
            let _ = writeln!(out, "invalid: {} violation(s)", view.violations.len());
            for v in &view.violations {
                let _ = writeln!(out, "  {}: {}", v.axiom, v.message);
            }
        }
    }
    Ok(out)
}

// ---- analyze / limset ----

#[derive(Serialize)]
struct LimsupRow {
    point: String,
    limsup: f64,
}

#[derive(Serialize)]
struct LimitSetView {
    r: f64,
    members: Vec<String>,
}

#[derive(Serialize)]
struct CriticalView {
    r_star: f64,
    argmin: Vec<String>,
}

/// What `analyze` computes for one space and sequence.
#[derive(Serialize)]
struct AnalysisReport {
    space: String,
    points: usize,
    k: f64,
    diameter: f64,
    tolerance: f64,
    sequence: SeqView,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit: Option<String>,
    convergent: bool,
    cauchy: bool,
    bound: f64,
    cluster_points: Vec<String>,
    critical_roughness: CriticalView,
    limsup: Vec<LimsupRow>,
    limit_sets: Vec<LimitSetView>,
}

fn limit_set_view(space: &ControlledSpace, seq: &EpSequence, r: f64) -> Result<LimitSetView, CliError> {
    let lim = rough_limit_set(seq, space, r)?;
    Ok(LimitSetView { r: real(r), members: labels(space, lim.members) })
}

pub fn analysis(
    source: &str,
    space: &ControlledSpace,
    seq: &EpSequence,
    rs: &[f64],
    structured: bool,
) -> Rendered {
    let limit = seq.is_convergent();
    let crit = critical_roughness(seq, space)?;
    let limsup = space
        .points()
        .map(|p| Ok(LimsupRow { point: space.label(p).to_string(), limsup: real(seq.limsup_distance(space, p)?) }))
        .collect::<Result<Vec<_>, CliError>>()?;
    let report = AnalysisReport {
        space: source.to_string(),
        points: space.len(),
        k: real(space.k()),
        diameter: real(space.diameter(&space.all_points())?),
        tolerance: space.tolerance(),
        sequence: SeqView::new(space, seq),
        limit: limit.map(|p| space.label(p).to_string()),
        convergent: limit.is_some(),
        cauchy: seq.is_cauchy(),
        bound: real(seq.boundedness(space)?.bound),
        cluster_points: labels(space, cluster_points(seq, space)?),
        critical_roughness: CriticalView { r_star: real(crit.r_star), argmin: labels(space, crit.argmin) },
        limsup,
        limit_sets: rs.iter().map(|&r| limit_set_view(space, seq, r)).collect::<Result<_, _>>()?,
    };
    if structured {
        return toml_out(&report);
    }

    let mut out = String::new();
    let set = |v: &[String]| format!("{{{}}}", v.join(", "));
    let _ = writeln!(out, "space: {} ({} points)", report.space, report.points);
    let _ = writeln!(out, "k = {}", format_real(report.k));
    let _ = writeln!(out, "diameter = {}", format_real(report.diameter));
    let _ = writeln!(out, "sequence: {}", seq_text(space, seq));
    match &report.limit {
        Some(x) => {
            let _ = writeln!(out, "convergent: yes, to {x}");
        }
        None => {
            let _ = writeln!(out, "convergent: no");
        }
    }
    let _ = writeln!(out, "cauchy: {}", if report.cauchy { "yes" } else { "no" });
    let _ = writeln!(out, "bounded: yes, d < {}", format_real(report.bound));
    let _ = writeln!(out, "cluster points: {}", set(&report.cluster_points));
    let _ = writeln!(
        out,
        "critical roughness: r* = {} at {}",
        format_real(report.critical_roughness.r_star),
        set(&report.critical_roughness.argmin)
    );
    let _ = writeln!(out, "limsup d(x_n, x):");
    let width = report.limsup.iter().map(|r| r.point.len()).max().unwrap_or(0);
    for row in &report.limsup {
        let _ = writeln!(out, "  {:<width$}  {}", row.point, format_real(row.limsup));
    }
    for lim in &report.limit_sets {
        let _ = writeln!(out, "LIM^{} = {}", format_real(lim.r), set(&lim.members));
    }
    Ok(out)
}

pub fn limit_set(space: &ControlledSpace, seq: &EpSequence, r: f64, structured: bool) -> Rendered {
    let view = limit_set_view(space, seq, r)?;
    if structured {
        return toml_out(&view);
    }
    Ok(format!("LIM^{} = {{{}}}\n", format_real(view.r), view.members.join(", ")))
}

// ---- theorems ----

#[derive(Serialize)]
struct WitnessView {
    relation: String,
    points: Vec<String>,
    value: f64,
    bound: f64,
}

#[derive(Serialize)]
struct CheckView {
    theorem: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessView>,
}

#[derive(Serialize)]
struct TheoremsView {
    checks_total: usize,
    held: usize,
    vacuous: usize,
    violated: usize,
    checks: Vec<CheckView>,
}

fn aux_text(space: &ControlledSpace, aux: &Aux) -> Option<String> {
    match aux {
        Aux::None => None,
        Aux::Subsequence { offset, stride } => Some(format!("offset {offset}, stride {stride}")),
        Aux::Shadow { shadow } => Some(format!("shadow {}", seq_text(space, shadow))),
        Aux::Probe { probe } => Some(format!("probe {}", seq_text(space, probe))),
    }
}

fn check_view(space: &ControlledSpace, rep: &TheoremReport) -> CheckView {
    let (status, reason, witness) = match &rep.verdict {
        Verdict::Holds => ("holds", None, None),
        Verdict::Vacuous { reason } => ("vacuous", Some(reason.clone()), None),
        Verdict::Violated { witness } => (
            "violated",
            None,
            Some(WitnessView {
                relation: witness.relation.clone(),
                points: labels(space, witness.points.iter().copied()),
                value: real(witness.value),
                bound: real(witness.bound),
            }),
        ),
    };
    CheckView {
        theorem: rep.theorem.code().to_string(),
        r: rep.params.r.map(real),
        status,
        detail: aux_text(space, &rep.params.aux),
        reason,
        witness,
    }
}

pub fn theorems(space: &ControlledSpace, reports: &[TheoremReport], structured: bool) -> Rendered {
    let checks: Vec<CheckView> = reports.iter().map(|r| check_view(space, r)).collect();
    let count = |s: &str| checks.iter().filter(|c| c.status == s).count();
    let view = TheoremsView {
        checks_total: checks.len(),
        held: count("holds"),
        vacuous: count("vacuous"),
        violated: count("violated"),
        checks,
    };
    if structured {
        return toml_out(&view);
    }
    let mut out = String::new();
    for c in &view.checks {
        let mut line = c.theorem.clone();
        if let Some(r) = c.r {
            let _ = write!(line, " r={}", format_real(r));
        }
        if let Some(d) = &c.detail {
            let _ = write!(line, " ({d})");
        }
        let _ = write!(line, ": {}", c.status);
        if let Some(reason) = &c.reason {
            let _ = write!(line, ", {reason}");
        }
        if let Some(w) = &c.witness {
            let _ = write!(
                line,
                ": {} at [{}]: {} vs bound {}",
                w.relation,
                w.points.join(", "),
                format_real(w.value),
                format_real(w.bound)
            );
        }
        let _ = writeln!(out, "{line}");
    }
    let _ = writeln!(
        out,
        "{} checks: {} held, {} vacuous, {} violated",
        view.checks_total, view.held, view.vacuous, view.violated
    );
    Ok(out)
}

// ---- fuzz ----

pub fn fuzz(summary: &FuzzSummary, structured: bool) -> Rendered {
    if structured {
        return toml_out(summary);
    }
    let mut out = String::new();
    let _ = writeln!(out, "seed {}, {} trials, {} checks", summary.seed, summary.trials, summary.checks);
    let _ = writeln!(out, "{:<16} {:>8} {:>8} {:>8} {:>8}", "theorem", "checked", "held", "vacuous", "failed");
    for (id, c) in &summary.theorems {
        let _ = writeln!(out, "{:<16} {:>8} {:>8} {:>8} {:>8}", id.code(), c.checked, c.held, c.vacuous, c.failed);
    }
    if let Some(m) = summary.diameter_ratio.max {
        let _ = writeln!(
            out,
            "max diam(LIM^r)/(2rk) = {} over {} samples",
            format_real(m),
            summary.diameter_ratio.samples
        );
    }
    for f in &summary.failures {
        let _ = writeln!(out, "FAILED trial {}: {}", f.trial, f.report.theorem);
    }
    for e in &summary.errors {
        let _ = writeln!(out, "ERROR trial {}: {}", e.trial, e.message);
    }
    let _ = writeln!(out, "failures: {}", summary.failures_total);
    Ok(out)
}
