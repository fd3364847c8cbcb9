//! Seeded fuzzing of every theorem check over random valid spaces.
//!
//! Trial `i` draws from its own ChaCha8 stream (`seed`, stream `i`), so a
//! run is reproducible and independent of how trials are scheduled.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::gen;
use super::{
    check_limitset_sequence, check_shadowing, check_subsequence, default_r_grid, diameter_ratio,
    run_all, TheoremId, TheoremReport, Verdict,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::rough::rough_limit_set;
use crate::sequence::EpSequence;
use crate::space::{ControlledSpace, Point, SpaceSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzConfig {
    pub trials: usize,
    pub max_points: usize,
    pub max_cycle: usize,
    pub max_prefix: usize,
    pub seed: u64,
    /// Fixed roughness grid; `None` uses [`default_r_grid`] per trial.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_grid: Option<Vec<f64>>,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { trials: 1000, max_points: 12, max_cycle: 4, max_prefix: 3, seed: 0, r_grid: None }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.max_points == 0 || self.max_cycle == 0 || self.max_prefix == 0 {
            return Err(Error::domain("trials, max_points, max_cycle and max_prefix must all be >= 1"));
        }
        if let Some(grid) = &self.r_grid {
            if grid.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
                return Err(Error::domain("r_grid entries must be finite and >= 0"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TheoremCounts {
    pub checked: usize,
    pub held: usize,
    pub vacuous: usize,
    pub failed: usize,
}

impl TheoremCounts {
    fn add(&mut self, other: &TheoremCounts) {
        self.checked += other.checked;
        self.held += other.held;
        self.vacuous += other.vacuous;
        self.failed += other.failed;
    }
}

/// A failed check together with the space it ran on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureRecord {
    pub trial: usize,
    pub points: Vec<String>,
    pub dist: Vec<Vec<f64>>,
    pub alpha: Vec<Vec<f64>>,
    pub report: TheoremReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialError {
    pub trial: usize,
    pub message: String,
}

/// Largest observed `diam(LIM^r) / (2rk)` over instances with `r > 0` and a
/// nonempty limit set. Recorded for inspection only.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct DiameterRatioLog {
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub trials: usize,
    pub checks: usize,
    pub failures_total: usize,
    pub config: FuzzConfig,
    pub diameter_ratio: DiameterRatioLog,
    pub theorems: BTreeMap<TheoremId, TheoremCounts>,
    pub errors: Vec<TrialError>,
    pub failures: Vec<FailureRecord>,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.failures_total == 0 && self.errors.is_empty()
    }
}

struct TrialOutcome {
    counts: BTreeMap<TheoremId, TheoremCounts>,
    failures: Vec<FailureRecord>,
    ratio: DiameterRatioLog,
    error: Option<TrialError>,
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn fuzz(config: &FuzzConfig) -> Result<FuzzSummary> {
    fuzz_with(config, Execution::default())
}

pub fn fuzz_with(config: &FuzzConfig, exec: Execution) -> Result<FuzzSummary> {
    config.validate()?;
    let outcomes = exec.map_range(config.trials, |t| run_trial(config, t));

    let mut theorems: BTreeMap<TheoremId, TheoremCounts> =
        TheoremId::ALL.iter().map(|&id| (id, TheoremCounts::default())).collect();
    let mut ratio = DiameterRatioLog::default();
    let mut failures = Vec::new();
    let mut errors = Vec::new();
    for o in outcomes {
        for (id, c) in &o.counts {
            theorems.entry(*id).or_default().add(c);
        }
        ratio.samples += o.ratio.samples;
        ratio.max = match (ratio.max, o.ratio.max) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        failures.extend(o.failures);
        errors.extend(o.error);
    }
    Ok(FuzzSummary {
        seed: config.seed,
        trials: config.trials,
        checks: theorems.values().map(|c| c.checked).sum(),
        failures_total: theorems.values().map(|c| c.failed).sum(),
        config: config.clone(),
        diameter_ratio: ratio,
        theorems,
        errors,
        failures,
    })
}

fn run_trial(config: &FuzzConfig, trial: usize) -> TrialOutcome {
    let mut rng = trial_rng(config.seed, trial);
    let spec = gen::random_spec(&mut rng, config.max_points);
    let mut outcome = TrialOutcome {
        counts: BTreeMap::new(),
        failures: Vec::new(),
        ratio: DiameterRatioLog::default(),
        error: None,
    };
    let result = ControlledSpace::new(spec.clone())
        .and_then(|space| trial_reports(config, &space, &mut rng, &mut outcome.ratio));
    match result {
        Ok(reports) => {
            for rep in reports {
                let c = outcome.counts.entry(rep.theorem).or_default();
                c.checked += 1;
                match rep.verdict {
                    Verdict::Holds => c.held += 1,
                    Verdict::Vacuous { .. } => c.vacuous += 1,
                    Verdict::Violated { .. } => {
                        c.failed += 1;
                        outcome.failures.push(failure(trial, &spec, rep));
                    }
                }
            }
        }
        Err(e) => outcome.error = Some(TrialError { trial, message: e.to_string() }),
    }
    outcome
}

fn failure(trial: usize, spec: &SpaceSpec, report: TheoremReport) -> FailureRecord {
    FailureRecord {
        trial,
        points: spec.labels().to_vec(),
        dist: spec.dist_table().to_vec(),
        alpha: spec.alpha_table().to_vec(),
        report,
    }
}

/// All checks for one random instance: the deterministic [`run_all`] battery
/// plus randomized subsequences, shadowing pairs that satisfy the closeness
/// hypothesis, and probes drawn from `LIM^r`.
fn trial_reports<R: Rng>(
    config: &FuzzConfig,
    space: &ControlledSpace,
    rng: &mut R,
    ratio: &mut DiameterRatioLog,
) -> Result<Vec<TheoremReport>> {
    let n = space.len();
    let seq = gen::random_sequence(rng, n, config.max_prefix, config.max_cycle);
    let grid = match &config.r_grid {
        Some(g) => g.clone(),
        None => default_r_grid(space, &seq)?,
    };
    let mut reports = run_all(space, &seq, &grid)?;

    for &r in &grid {
        if let Some(q) = diameter_ratio(space, &seq, r)? {
            ratio.samples += 1;
            ratio.max = Some(ratio.max.map_or(q, |m| m.max(q)));
        }

        let offset = rng.random_range(1..=4);
        let stride = rng.random_range(1..=5);
        reports.push(check_subsequence(space, &seq, r, offset, stride)?);

        if r > 0.0 {
            let a = gen::random_convergent(rng, n, config.max_prefix);
            let xi = a.is_convergent().expect("generated as convergent");
            let near: Vec<Point> =
                space.points().filter(|&p| space.leq(space.k() * space.dist(xi, p), r)).collect();
            let b = gen::random_sequence_within(rng, n, &near, config.max_prefix, config.max_cycle);
            reports.push(check_shadowing(space, &a, &b, r)?);
        }

        let members: Vec<Point> = rough_limit_set(&seq, space, r)?.members.into_iter().collect();
        if !members.is_empty() {
            let pick = |rng: &mut R| members[rng.random_range(0..members.len())];
            let len = rng.random_range(0..=config.max_prefix);
            let prefix = (0..len).map(|_| pick(rng)).collect();
            let probe = EpSequence::new(prefix, vec![pick(rng)])?;
            reports.push(check_limitset_sequence(space, &seq, r, &probe)?);
        }
    }
    Ok(reports)
}
