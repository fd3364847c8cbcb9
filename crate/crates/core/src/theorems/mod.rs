//! Executable checks for the rough-convergence theorems.
//!
//! Each check evaluates one proved statement on a concrete space, sequence
//! and roughness degree and returns a [`TheoremReport`]. A report separates
//! three outcomes: the conclusion was verified ([`Verdict::Holds`]), the
//! hypothesis did not apply or the conclusion is about an empty set
//! ([`Verdict::Vacuous`]), or the conclusion failed ([`Verdict::Violated`],
//! with a witness). Since every statement is proved, a violation always means
//! a bug in this crate.

pub mod fuzz;
pub mod gen;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rough::{cluster_points, critical_roughness, derived_set, rough_limit_set};
use crate::sequence::EpSequence;
use crate::space::{ControlledSpace, Point, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TheoremId {
    /// `diam(LIM^r) ≤ 2rk`, and `LIM^r` is bounded.
    #[serde(rename = "T_DIAM")]
    Diameter,
    /// `x_n → x` implies `B̄(x,r) ⊆ LIM^{rk}` and `LIM^r ⊆ B̄(x,rk)`.
    #[serde(rename = "T_BALL_SANDWICH")]
    BallSandwich,
    /// `(LIM^r)' ⊆ LIM^{rk}`; with `α ≡ 1`, `LIM^r` is closed.
    #[serde(rename = "T_DERIVED_SET")]
    DerivedSet,
    /// `LIM^r ≠ ∅` implies the sequence is bounded.
    #[serde(rename = "T_ROUGH_BOUNDED")]
    RoughImpliesBounded,
    /// A sequence bounded by `B` rough-converges with degree `2kB` to each of its terms.
    #[serde(rename = "T_BOUNDED_ROUGH")]
    BoundedImpliesRough,
    /// `LIM^r x_n ⊆ LIM^r x_{n_i}`.
    #[serde(rename = "T_SUBSEQ")]
    Subsequence,
    /// `a_n → ξ` and eventually `d(a_i,b_i) ≤ r/k` imply `ξ ∈ LIM^r b_n`.
    #[serde(rename = "T_SHADOW")]
    Shadowing,
    /// A convergent sequence inside `LIM^r` has its limit in `LIM^{rk}`.
    #[serde(rename = "T_LIMSET_SEQ")]
    LimitSetSequence,
    /// `LIM^r ⊆ B̄(c, rk)` for every cluster point `c`.
    #[serde(rename = "T_CLUSTER_BALL")]
    ClusterBall,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::Diameter,
        TheoremId::BallSandwich,
        TheoremId::DerivedSet,
        TheoremId::RoughImpliesBounded,
        TheoremId::BoundedImpliesRough,
        TheoremId::Subsequence,
        TheoremId::Shadowing,
        TheoremId::LimitSetSequence,
        TheoremId::ClusterBall,
    ];

    pub fn code(self) -> &'static str {
        match self {
            TheoremId::Diameter => "T_DIAM",
            TheoremId::BallSandwich => "T_BALL_SANDWICH",
            TheoremId::DerivedSet => "T_DERIVED_SET",
            TheoremId::RoughImpliesBounded => "T_ROUGH_BOUNDED",
            TheoremId::BoundedImpliesRough => "T_BOUNDED_ROUGH",
            TheoremId::Subsequence => "T_SUBSEQ",
            TheoremId::Shadowing => "T_SHADOW",
            TheoremId::LimitSetSequence => "T_LIMSET_SEQ",
            TheoremId::ClusterBall => "T_CLUSTER_BALL",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A failed inequality `value ≤ bound`: the check found `value > bound`
/// beyond tolerance (or `value ≥ bound` where the relation is strict).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub relation: String,
    pub points: Vec<Point>,
    pub value: f64,
    pub bound: f64,
}

impl Witness {
    fn new(relation: impl Into<String>, points: Vec<Point>, value: f64, bound: f64) -> Self {
        Witness { relation: relation.into(), points, value, bound }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Vacuous { reason: String },
    Violated { witness: Witness },
}

impl Verdict {
    fn vacuous(reason: impl Into<String>) -> Self {
        Verdict::Vacuous { reason: reason.into() }
    }

    fn from_witness(w: Option<Witness>) -> Self {
        match w {
            None => Verdict::Holds,
            Some(witness) => Verdict::Violated { witness },
        }
    }
}

/// Extra inputs some checks take beyond `(seq, r)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Aux {
    None,
    Subsequence { offset: usize, stride: usize },
    Shadow { shadow: EpSequence },
    Probe { probe: EpSequence },
}

/// Everything needed, together with the space, to re-run a check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckParams {
    pub seq: EpSequence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    pub aux: Aux,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub verdict: Verdict,
    pub params: CheckParams,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        !matches!(self.verdict, Verdict::Violated { .. })
    }

    pub fn is_vacuous(&self) -> bool {
        matches!(self.verdict, Verdict::Vacuous { .. })
    }

    /// Runs the same check again from the recorded parameters.
    pub fn recheck(&self, space: &ControlledSpace) -> Result<TheoremReport> {
        let p = &self.params;
        let r = || p.r.ok_or_else(|| Error::domain("report is missing its roughness degree"));
        match (self.theorem, &p.aux) {
            (TheoremId::Diameter, _) => check_diameter_bound(space, &p.seq, r()?),
            (TheoremId::BallSandwich, _) => check_ball_sandwich(space, &p.seq, r()?),
            (TheoremId::DerivedSet, _) => check_derived_set(space, &p.seq, r()?),
            (TheoremId::RoughImpliesBounded, _) => check_rough_implies_bounded(space, &p.seq, r()?),
            (TheoremId::BoundedImpliesRough, _) => check_bounded_implies_rough(space, &p.seq),
            (TheoremId::Subsequence, Aux::Subsequence { offset, stride }) => {
                check_subsequence(space, &p.seq, r()?, *offset, *stride)
            }
            (TheoremId::Shadowing, Aux::Shadow { shadow }) => {
                check_shadowing(space, &p.seq, shadow, r()?)
            }
            (TheoremId::LimitSetSequence, Aux::Probe { probe }) => {
                check_limitset_sequence(space, &p.seq, r()?, probe)
            }
            (TheoremId::ClusterBall, _) => check_cluster_ball(space, &p.seq, r()?),
            (id, aux) => Err(Error::domain(format!("{id} cannot be re-run with {aux:?}"))),
        }
    }
}

fn report(theorem: TheoremId, verdict: Verdict, seq: &EpSequence, r: Option<f64>, aux: Aux) -> TheoremReport {
    TheoremReport { theorem, verdict, params: CheckParams { seq: seq.clone(), r, aux } }
}

/// First member of `inner` outside `outer`, judged by `value(p) ≤ bound`.
fn inclusion_witness(
    space: &ControlledSpace,
    inner: &PointSet,
    bound: f64,
    relation: &str,
    value: impl Fn(Point) -> f64,
    extra: &[Point],
) -> Option<Witness> {
    inner.iter().find_map(|&p| {
        let v = value(p);
        (!space.leq(v, bound)).then(|| {
            let mut pts = extra.to_vec();
            pts.push(p);
            Witness::new(relation, pts, v, bound)
        })
    })
}

pub fn check_diameter_bound(space: &ControlledSpace, seq: &EpSequence, r: f64) -> Result<TheoremReport> {
    let lim = rough_limit_set(seq, space, r)?;
    let bound = 2.0 * r * space.k();
    let verdict = match space.farthest_pair(&lim.members)? {
        None => Verdict::vacuous("LIM^r is empty"),
        Some((x, y, d)) if !d.is_finite() => {
            Verdict::from_witness(Some(Witness::new("diam(LIM^r) < inf", vec![x, y], d, f64::MAX)))
        }
        Some((x, y, d)) => Verdict::from_witness(
            (!space.leq(d, bound)).then(|| Witness::new("diam(LIM^r) <= 2rk", vec![x, y], d, bound)),
        ),
    };
    Ok(report(TheoremId::Diameter, verdict, seq, Some(r), Aux::None))
}

/// `diam(LIM^r) / (2rk)` when `r > 0` and `LIM^r` is nonempty.
pub fn diameter_ratio(space: &ControlledSpace, seq: &EpSequence, r: f64) -> Result<Option<f64>> {
    let lim = rough_limit_set(seq, space, r)?;
    if r == 0.0 || lim.is_empty() {
        return Ok(None);
    }
    Ok(Some(space.diameter(&lim.members)? / (2.0 * r * space.k())))
}

pub fn check_ball_sandwich(space: &ControlledSpace, seq: &EpSequence, r: f64) -> Result<TheoremReport> {
    let lim_r = rough_limit_set(seq, space, r)?;
    let verdict = match seq.is_convergent() {
        None => Verdict::vacuous("sequence is not convergent"),
        Some(x) => {
            let rk = r * space.k();
            let ball_r = space.closed_ball(x, r)?;
            let limsup = |p: Point| seq.limsup_unchecked(space, p);
            let first = inclusion_witness(space, &ball_r, rk, "B(x,r) subset LIM^{rk}", limsup, &[x]);
            let second = || {
                inclusion_witness(
                    space,
                    &lim_r.members,
                    rk,
                    "LIM^r subset B(x,rk)",
                    |p| space.dist(x, p),
                    &[x],
                )
            };
            Verdict::from_witness(first.or_else(second))
        }
    };
    Ok(report(TheoremId::BallSandwich, verdict, seq, Some(r), Aux::None))
}

pub fn check_derived_set(space: &ControlledSpace, seq: &EpSequence, r: f64) -> Result<TheoremReport> {
    let lim = rough_limit_set(seq, space, r)?;
    let derived = derived_set(space, &lim.members)?;
    let verdict = if derived.is_empty() {
        Verdict::vacuous("derived set of LIM^r is empty")
    } else {
        let limsup = |p: Point| seq.limsup_unchecked(space, p);
        let mut w = inclusion_witness(
            space,
            &derived,
            r * space.k(),
            "(LIM^r)' subset LIM^{rk}",
            limsup,
            &[],
        );
        if w.is_none() && space.is_metric() {
            w = inclusion_witness(space, &derived, r, "(LIM^r)' subset LIM^r", limsup, &[]);
        }
        Verdict::from_witness(w)
    };
    Ok(report(TheoremId::DerivedSet, verdict, seq, Some(r), Aux::None))
}

pub fn check_rough_implies_bounded(
    space: &ControlledSpace,
    seq: &EpSequence,
    r: f64,
) -> Result<TheoremReport> {
    let lim = rough_limit_set(seq, space, r)?;
    let verdict = if lim.is_empty() {
        Verdict::vacuous("LIM^r is empty")
    } else {
        let b = seq.boundedness(space)?;
        let values: Vec<Point> = seq.values().into_iter().collect();
        let w = if !(b.bounded && b.bound.is_finite()) {
            Some(Witness::new("sequence is bounded", vec![], b.bound, f64::MAX))
        } else {
            // Strict inequality, so no tolerance here.
            values.iter().enumerate().find_map(|(i, &x)| {
                values[i..].iter().find_map(|&y| {
                    let d = space.dist(x, y);
                    (d >= b.bound).then(|| Witness::new("d(x_n,x_m) < B", vec![x, y], d, b.bound))
                })
            })
        };
        Verdict::from_witness(w)
    };
    Ok(report(TheoremId::RoughImpliesBounded, verdict, seq, Some(r), Aux::None))
}

pub fn check_bounded_implies_rough(space: &ControlledSpace, seq: &EpSequence) -> Result<TheoremReport> {
    let b = seq.boundedness(space)?;
    let degree = 2.0 * space.k() * b.bound;
    let w = inclusion_witness(
        space,
        &seq.values(),
        degree,
        "x_p in LIM^{2kB}",
        |p| seq.limsup_unchecked(space, p),
        &[],
    );
    Ok(report(TheoremId::BoundedImpliesRough, Verdict::from_witness(w), seq, None, Aux::None))
}

pub fn check_subsequence(
    space: &ControlledSpace,
    seq: &EpSequence,
    r: f64,
    offset: usize,
    stride: usize,
) -> Result<TheoremReport> {
    let sub = seq.arithmetic_subsequence(offset, stride)?;
    let lim = rough_limit_set(seq, space, r)?;
    let aux = Aux::Subsequence { offset, stride };
    let verdict = if lim.is_empty() {
        Verdict::vacuous("LIM^r is empty")
    } else {
        let w = inclusion_witness(
            space,
            &lim.members,
            r,
            "LIM^r x_n subset LIM^r x_{n_i}",
            |p| sub.limsup_unchecked(space, p),
            &[],
        );
        Verdict::from_witness(w)
    };
    Ok(report(TheoremId::Subsequence, verdict, seq, Some(r), aux))
}

/// `seq_a` must converge to some `ξ`; `seq_b` must stay within `r/k` of it
/// termwise once both prefixes are over. Then `ξ ∈ LIM^r seq_b`.
pub fn check_shadowing(
    space: &ControlledSpace,
    seq_a: &EpSequence,
    seq_b: &EpSequence,
    r: f64,
) -> Result<TheoremReport> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("shadowing needs a finite r > 0, got {r}")));
    }
    seq_a.check_in(space)?;
    seq_b.check_in(space)?;
    let aux = Aux::Shadow { shadow: seq_b.clone() };
    let k = space.k();

    let Some(xi) = seq_a.is_convergent() else {
        return Ok(report(
            TheoremId::Shadowing,
            Verdict::vacuous("first sequence is not convergent"),
            seq_a,
            Some(r),
            aux,
        ));
    };
    let start = seq_a.prefix().len().max(seq_b.prefix().len()) + 1;
    let span = lcm(seq_a.cycle().len(), seq_b.cycle().len());
    let far = (start..start + span).find(|&i| {
        let d = space.dist(seq_a.at(i), seq_b.at(i));
        !space.leq(k * d, r)
    });
    let verdict = match far {
        Some(i) => Verdict::vacuous(format!("d(a_i,b_i) > r/k at i = {i}")),
        None => {
            let limsup = seq_b.limsup_unchecked(space, xi);
            Verdict::from_witness(
                (!space.leq(limsup, r)).then(|| Witness::new("xi in LIM^r b_n", vec![xi], limsup, r)),
            )
        }
    };
    Ok(report(TheoremId::Shadowing, verdict, seq_a, Some(r), aux))
}

pub fn check_limitset_sequence(
    space: &ControlledSpace,
    seq: &EpSequence,
    r: f64,
    probe: &EpSequence,
) -> Result<TheoremReport> {
    probe.check_in(space)?;
    let lim = rough_limit_set(seq, space, r)?;
    let aux = Aux::Probe { probe: probe.clone() };
    let verdict = if !probe.values().is_subset(&lim.members) {
        Verdict::vacuous("probe leaves LIM^r")
    } else {
        match probe.is_convergent() {
            None => Verdict::vacuous("probe is not convergent"),
            Some(xi) => {
                let limsup = seq.limsup_unchecked(space, xi);
                let rk = r * space.k();
                Verdict::from_witness(
                    (!space.leq(limsup, rk))
                        .then(|| Witness::new("xi in LIM^{rk} x_n", vec![xi], limsup, rk)),
                )
            }
        }
    };
    Ok(report(TheoremId::LimitSetSequence, verdict, seq, Some(r), aux))
}

pub fn check_cluster_ball(space: &ControlledSpace, seq: &EpSequence, r: f64) -> Result<TheoremReport> {
    let lim = rough_limit_set(seq, space, r)?;
    let clusters = cluster_points(seq, space)?;
    let rk = r * space.k();
    let verdict = if lim.is_empty() {
        Verdict::vacuous("LIM^r is empty")
    } else {
        let w = clusters.iter().find_map(|&c| {
            inclusion_witness(space, &lim.members, rk, "LIM^r subset B(c,rk)", |p| space.dist(c, p), &[c])
        });
        Verdict::from_witness(w)
    };
    Ok(report(TheoremId::ClusterBall, verdict, seq, Some(r), Aux::None))
}

/// `{0, r*/2, r*, (r*+D)/2, D, 2D}` with `r*` the critical roughness and `D`
/// the diameter of the whole space; exact duplicates removed.
pub fn default_r_grid(space: &ControlledSpace, seq: &EpSequence) -> Result<Vec<f64>> {
    let r_star = critical_roughness(seq, space)?.r_star;
    let d = space.diameter(&space.all_points())?;
    let mut grid = vec![0.0, r_star / 2.0, r_star, (r_star + d) / 2.0, d, 2.0 * d];
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

const DEFAULT_SUBSEQUENCES: [(usize, usize); 3] = [(1, 1), (1, 2), (2, 3)];

/// Runs every check for every `r` in the grid.
///
/// Inputs for the checks that need more than `(seq, r)` are derived from the
/// instance: arithmetic subsequences `(1,1)`, `(1,2)`, `(2,3)`; shadowing of
/// `seq` by the constant sequence at the first critical point (and by itself
/// when it converges); probes that are constant at, or eventually constant
/// inside, `LIM^r`.
pub fn run_all(space: &ControlledSpace, seq: &EpSequence, r_grid: &[f64]) -> Result<Vec<TheoremReport>> {
    seq.check_in(space)?;
    let anchor = *critical_roughness(seq, space)?
        .argmin
        .first()
        .expect("a nonempty space has a critical point");

    let mut out = vec![check_bounded_implies_rough(space, seq)?];
    for &r in r_grid {
        out.push(check_diameter_bound(space, seq, r)?);
        out.push(check_ball_sandwich(space, seq, r)?);
        out.push(check_derived_set(space, seq, r)?);
        out.push(check_rough_implies_bounded(space, seq, r)?);
        for (offset, stride) in DEFAULT_SUBSEQUENCES {
            out.push(check_subsequence(space, seq, r, offset, stride)?);
        }
        if r > 0.0 {
            out.push(check_shadowing(space, &EpSequence::constant(anchor), seq, r)?);
            if seq.is_convergent().is_some() {
                out.push(check_shadowing(space, seq, seq, r)?);
            }
        }
        for probe in limit_set_probes(space, seq, r)? {
            out.push(check_limitset_sequence(space, seq, r, &probe)?);
        }
        out.push(check_cluster_ball(space, seq, r)?);
    }
    Ok(out)
}

fn limit_set_probes(space: &ControlledSpace, seq: &EpSequence, r: f64) -> Result<Vec<EpSequence>> {
    let lim = rough_limit_set(seq, space, r)?;
    let members: Vec<Point> = lim.members.iter().copied().collect();
    Ok(match members.split_last() {
        None => vec![EpSequence::constant(seq.cycle()[0])],
        Some((&last, rest)) => {
            let mut probes: Vec<EpSequence> = members.iter().map(|&p| EpSequence::constant(p)).collect();
            if !rest.is_empty() {
                probes.push(EpSequence::new(rest.to_vec(), vec![last])?);
            }
            probes
        }
    })
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}
