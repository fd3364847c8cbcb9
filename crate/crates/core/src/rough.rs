//! Rough convergence of eventually-periodic sequences.
//!
//! `x_n` is rough convergent to `x` with degree `r` when for every `ε > 0`
//! eventually `d(x_n, x) < r + ε`. For an eventually-periodic sequence this is
//! exactly `limsup d(x_n, x) ≤ r`, which is what every routine here evaluates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::EpSequence;
use crate::space::{ControlledSpace, Point, PointSet};

/// `LIM^r x_n`: every point the sequence rough-converges to with degree `r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoughLimitSet {
    pub r: f64,
    pub members: PointSet,
}

impl RoughLimitSet {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.members.contains(&p)
    }
}

fn check_degree(r: f64) -> Result<()> {
    if r >= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("roughness degree must be finite and >= 0, got {r}")))
    }
}

pub fn is_rough_limit(seq: &EpSequence, space: &ControlledSpace, x: Point, r: f64) -> Result<bool> {
    check_degree(r)?;
    let limsup = seq.limsup_distance(space, x)?;
    Ok(space.leq(limsup, r))
}

pub fn rough_limit_set(seq: &EpSequence, space: &ControlledSpace, r: f64) -> Result<RoughLimitSet> {
    check_degree(r)?;
    seq.check_in(space)?;
    let members = space
        .points()
        .filter(|&x| space.leq(seq.limsup_unchecked(space, x), r))
        .collect();
    Ok(RoughLimitSet { r, members })
}

/// `limsup d(x_n, x)` for every point, in point order.
pub fn limsup_profile(seq: &EpSequence, space: &ControlledSpace) -> Result<Vec<f64>> {
    seq.check_in(space)?;
    Ok(space.points().map(|x| seq.limsup_unchecked(space, x)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalRoughness {
    /// Smallest `r` with `LIM^r` nonempty.
    pub r_star: f64,
    /// Points whose limsup distance equals `r_star` (within tolerance).
    pub argmin: PointSet,
}

pub fn critical_roughness(seq: &EpSequence, space: &ControlledSpace) -> Result<CriticalRoughness> {
    let profile = limsup_profile(seq, space)?;
    let r_star = profile.iter().copied().fold(f64::INFINITY, f64::min);
    let argmin = space.points().filter(|x| space.leq(profile[x.0], r_star)).collect();
    Ok(CriticalRoughness { r_star, argmin })
}

/// Points `c` such that for every `ε > 0` and every `p` some `m > p` has
/// `d(x_m, c) < ε`.
///
/// Only cycle values recur past every `p`, so `c` qualifies iff some cycle
/// value lies within every `ε` of it. Distances between distinct points are
/// bounded below by the minimum positive distance, so checking
/// `ε = min_positive_dist / 2` decides all smaller `ε` as well.
pub fn cluster_points(seq: &EpSequence, space: &ControlledSpace) -> Result<PointSet> {
    seq.check_in(space)?;
    let eps = space.min_positive_dist() / 2.0;
    let tail = seq.tail_values();
    Ok(space
        .points()
        .filter(|&c| tail.iter().any(|&v| space.dist(v, c) < eps))
        .collect())
}

/// Limit points of `subset`: `y` with every open ball `B(y, ε)` meeting
/// `subset \ {y}`. On a finite set that means some other member sits at
/// distance exactly zero from `y`.
pub fn derived_set(space: &ControlledSpace, subset: &PointSet) -> Result<PointSet> {
    space.check_set(subset)?;
    Ok(space
        .points()
        .filter(|&y| {
            subset
                .iter()
                .filter(|&&a| a != y)
                .map(|&a| space.dist(y, a))
                .fold(f64::INFINITY, f64::min)
                == 0.0
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{paper_example, SpaceSpec};

    fn inv_sqrt2() -> f64 {
        1.0 / 2f64.sqrt()
    }

    fn pt(i: usize) -> Point {
        Point(i - 1)
    }

    fn xi() -> EpSequence {
        EpSequence::periodic(vec![pt(2), pt(3)]).unwrap()
    }

    fn set(ids: &[usize]) -> PointSet {
        ids.iter().map(|&i| pt(i)).collect()
    }

    #[test]
    fn membership_on_example() {
        let space = paper_example(4).unwrap();
        assert!(is_rough_limit(&xi(), &space, pt(2), inv_sqrt2()).unwrap());
        assert!(!is_rough_limit(&xi(), &space, pt(4), inv_sqrt2()).unwrap());
        let c = EpSequence::constant(pt(3));
        assert!(is_rough_limit(&c, &space, pt(3), 0.0).unwrap());
        assert!(is_rough_limit(&c, &space, pt(3), -0.1).is_err());
        assert!(is_rough_limit(&c, &space, Point(4), 0.1).is_err());
        assert!(is_rough_limit(&c, &space, pt(3), f64::NAN).is_err());
    }

    #[test]
    fn limit_sets_on_example() {
        for n in [4, 5, 10] {
            let space = paper_example(n).unwrap();
            assert_eq!(rough_limit_set(&xi(), &space, inv_sqrt2()).unwrap().members, set(&[2, 3]));
            assert_eq!(rough_limit_set(&xi(), &space, 1.0).unwrap().members, space.all_points());
            assert!(rough_limit_set(&xi(), &space, 0.0).unwrap().is_empty());
        }
    }

    #[test]
    fn critical_degree() {
        let space = paper_example(4).unwrap();
        let crit = critical_roughness(&xi(), &space).unwrap();
        assert_eq!(crit.r_star, inv_sqrt2());
        assert_eq!(crit.argmin, set(&[2, 3]));

        let conv = EpSequence::new(vec![pt(1)], vec![pt(4)]).unwrap();
        let crit = critical_roughness(&conv, &space).unwrap();
        assert_eq!(crit.r_star, 0.0);
        assert_eq!(crit.argmin, set(&[4]));

        let one = space.restrict(&set(&[3])).unwrap();
        let crit = critical_roughness(&EpSequence::constant(Point(0)), &one).unwrap();
        assert_eq!(crit.r_star, 0.0);
    }

    #[test]
    fn clusters() {
        let space = paper_example(6).unwrap();
        assert_eq!(cluster_points(&xi(), &space).unwrap(), set(&[2, 3]));
        assert_eq!(cluster_points(&EpSequence::constant(pt(6)), &space).unwrap(), set(&[6]));
        let s = EpSequence::new(vec![pt(5)], vec![pt(2)]).unwrap();
        assert_eq!(cluster_points(&s, &space).unwrap(), set(&[2]));
    }

    #[test]
    fn derived_sets_are_empty_on_finite_spaces() {
        let space = paper_example(6).unwrap();
        assert!(derived_set(&space, &PointSet::new()).unwrap().is_empty());
        assert!(derived_set(&space, &set(&[4])).unwrap().is_empty());
        assert!(derived_set(&space, &space.all_points()).unwrap().is_empty());
        assert!(derived_set(&space, &[Point(6)].into()).is_err());
    }

    #[test]
    fn single_point_space() {
        let spec = SpaceSpec::new(vec!["a".into()], vec![vec![0.0]], vec![vec![1.0]]).unwrap();
        let space = ControlledSpace::new(spec).unwrap();
        let c = EpSequence::constant(Point(0));
        assert_eq!(cluster_points(&c, &space).unwrap(), [Point(0)].into());
        assert_eq!(rough_limit_set(&c, &space, 0.0).unwrap().members, [Point(0)].into());
    }
}
