//! Finite controlled metric type spaces.
//!
//! A space is a finite point set `X` with a distance table `d` and a control
//! table `α ≥ 1` such that
//!
//! ```text
//! (d1) d(x, y) = 0  ⇔  x = y
//! (d2) d(x, y) = d(y, x)
//! (d3) d(x, y) ≤ α(x, z)·d(x, z) + α(z, y)·d(z, y)    for all x, y, z
//! ```
//!
//! [`SpaceSpec`] holds raw, shape-checked tables. [`ControlledSpace`] is a
//! spec that passed [`validate_axioms`], with `k = max α` cached.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;

/// Absolute slack applied to the right-hand side of every `≤` comparison.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Index of a point within its space (position in the `points` list).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Point(pub usize);

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Point sets are ordered by point index, which is the `points` list order.
pub type PointSet = BTreeSet<Point>;

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSpec {
    points: Vec<String>,
    dist: Vec<Vec<f64>>,
    alpha: Vec<Vec<f64>>,
}

impl SpaceSpec {
    /// Shape-checks the tables. Axioms are not checked here.
    pub fn new(points: Vec<String>, dist: Vec<Vec<f64>>, alpha: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::Shape("a space needs at least one point".into()));
        }
        let mut seen = BTreeSet::new();
        for label in &points {
            if !seen.insert(label.as_str()) {
                return Err(Error::Shape(format!("duplicate point label `{label}`")));
            }
        }
        for (name, table) in [("dist", &dist), ("alpha", &alpha)] {
            if table.len() != n {
                return Err(Error::Shape(format!(
                    "`{name}` has {} rows, expected {n}",
                    table.len()
                )));
            }
            for (i, row) in table.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::Shape(format!(
                        "`{name}` row {i} has {} entries, expected {n}",
                        row.len()
                    )));
                }
                for (j, &v) in row.iter().enumerate() {
                    if !v.is_finite() {
                        return Err(Error::Shape(format!("`{name}`[{i}][{j}] is not finite")));
                    }
                    if name == "dist" && v < 0.0 {
                        return Err(Error::Shape(format!("`dist`[{i}][{j}] = {v} is negative")));
                    }
                }
            }
        }
        Ok(SpaceSpec { points, dist, alpha })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.points
    }

    pub fn dist_table(&self) -> &[Vec<f64>] {
        &self.dist
    }

    pub fn alpha_table(&self) -> &[Vec<f64>] {
        &self.alpha
    }

    fn d(&self, x: usize, y: usize) -> f64 {
        self.dist[x][y]
    }

    fn a(&self, x: usize, y: usize) -> f64 {
        self.alpha[x][y]
    }
}

/// A failed axiom, with the offending points and both sides of the check.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    /// d1: a diagonal entry is not zero.
    SelfDistance { x: Point, distance: f64 },
    /// d1: two distinct points at distance zero.
    ZeroDistance { x: Point, y: Point },
    /// d2
    Asymmetric { x: Point, y: Point, forward: f64, backward: f64 },
    /// α(x, y) < 1
    ControlBelowOne { x: Point, y: Point, alpha: f64 },
    /// d3: `lhs = d(x,y)` exceeds `rhs = α(x,z)d(x,z) + α(z,y)d(z,y)`.
    Triangle { x: Point, y: Point, z: Point, lhs: f64, rhs: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfDistance { x, distance } => {
                write!(f, "d1: d({x},{x}) = {distance} but must be 0")
            }
            Violation::ZeroDistance { x, y } => {
                write!(f, "d1: d({x},{y}) = 0 for distinct points")
            }
            Violation::Asymmetric { x, y, forward, backward } => {
                write!(f, "d2: d({x},{y}) = {forward} but d({y},{x}) = {backward}")
            }
            Violation::ControlBelowOne { x, y, alpha } => {
                write!(f, "alpha({x},{y}) = {alpha} < 1")
            }
            Violation::Triangle { x, y, z, lhs, rhs } => write!(
                f,
                "d3: d({x},{y}) = {lhs} > alpha({x},{z})d({x},{z}) + alpha({z},{y})d({z},{y}) = {rhs}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ValidationResult {
    Valid,
    Invalid(Vec<Violation>),
}

impl ValidationResult {
    pub fn is_valid(&self) -> bool {
        matches!(self, ValidationResult::Valid)
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            ValidationResult::Valid => &[],
            ValidationResult::Invalid(v) => v,
        }
    }
}

pub fn validate_axioms(spec: &SpaceSpec) -> ValidationResult {
    validate_axioms_with(spec, DEFAULT_TOLERANCE, Execution::default())
}

/// Checks d1, d2, `α ≥ 1` and every ordered triple for d3 (`n³` evaluations,
/// degenerate triples included). Only d3 uses the tolerance.
pub fn validate_axioms_with(spec: &SpaceSpec, tol: f64, exec: Execution) -> ValidationResult {
    let n = spec.len();
    let mut violations = Vec::new();

    for x in 0..n {
        for y in 0..n {
            let d = spec.d(x, y);
            if x == y && d != 0.0 {
                violations.push(Violation::SelfDistance { x: Point(x), distance: d });
            }
            if x < y {
                if d == 0.0 {
                    violations.push(Violation::ZeroDistance { x: Point(x), y: Point(y) });
                }
                let back = spec.d(y, x);
                if d != back {
                    violations.push(Violation::Asymmetric {
                        x: Point(x),
                        y: Point(y),
                        forward: d,
                        backward: back,
                    });
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let a = spec.a(x, y);
            if a < 1.0 {
                violations.push(Violation::ControlBelowOne { x: Point(x), y: Point(y), alpha: a });
            }
        }
    }

    let triangle = exec.map_range(n, |x| {
        let mut found = Vec::new();
        for y in 0..n {
            let lhs = spec.d(x, y);
            for z in 0..n {
                let rhs = spec.a(x, z) * spec.d(x, z) + spec.a(z, y) * spec.d(z, y);
                if lhs > rhs + tol {
                    found.push(Violation::Triangle {
                        x: Point(x),
                        y: Point(y),
                        z: Point(z),
                        lhs,
                        rhs,
                    });
                }
            }
        }
        found
    });
    violations.extend(triangle.into_iter().flatten());

    if violations.is_empty() {
        ValidationResult::Valid
    } else {
        ValidationResult::Invalid(violations)
    }
}

/// A validated space. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlledSpace {
    spec: SpaceSpec,
    k: f64,
    min_positive_dist: f64,
    tol: f64,
}

pub fn build_space(spec: SpaceSpec) -> Result<ControlledSpace> {
    ControlledSpace::new(spec)
}

impl ControlledSpace {
    pub fn new(spec: SpaceSpec) -> Result<Self> {
        Self::with_tolerance(spec, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(spec: SpaceSpec, tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Error::domain(format!("tolerance must be finite and >= 0, got {tol}")));
        }
        if let ValidationResult::Invalid(v) = validate_axioms_with(&spec, tol, Execution::default()) {
            return Err(Error::Axioms(v));
        }
        let k = spec.alpha.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        let min_positive_dist = spec
            .dist
            .iter()
            .flatten()
            .copied()
            .filter(|&d| d > 0.0)
            .fold(f64::INFINITY, f64::min);
        Ok(ControlledSpace { spec, k, min_positive_dist, tol })
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.spec.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `sup α` over all pairs.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// Smallest nonzero distance, `+∞` for a one-point space.
    pub fn min_positive_dist(&self) -> f64 {
        self.min_positive_dist
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// `a ≤ b` with the space's tolerance.
    pub fn leq(&self, a: f64, b: f64) -> bool {
        a <= b + self.tol
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = Point> + Clone {
        (0..self.len()).map(Point)
    }

    pub fn all_points(&self) -> PointSet {
        self.points().collect()
    }

    pub fn label(&self, p: Point) -> &str {
        &self.spec.points[p.0]
    }

    pub fn point(&self, label: &str) -> Result<Point> {
        self.spec
            .points
            .iter()
            .position(|l| l == label)
            .map(Point)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn check(&self, p: Point) -> Result<Point> {
        if p.0 < self.len() {
            Ok(p)
        } else {
            Err(Error::UnknownPoint(p))
        }
    }

    pub(crate) fn check_set(&self, set: &PointSet) -> Result<()> {
        match set.iter().next_back() {
            Some(&p) => self.check(p).map(|_| ()),
            None => Ok(()),
        }
    }

    /// Panics if either point is out of range; use [`check`](Self::check)
    /// on untrusted input first.
    pub fn dist(&self, x: Point, y: Point) -> f64 {
        self.spec.d(x.0, y.0)
    }

    pub fn alpha(&self, x: Point, y: Point) -> f64 {
        self.spec.a(x.0, y.0)
    }

    /// True when every control entry is exactly 1, i.e. an ordinary metric.
    pub fn is_metric(&self) -> bool {
        self.spec.alpha.iter().flatten().all(|&a| a == 1.0)
    }

    pub fn ball(&self, center: Point, radius: f64, kind: BallKind) -> Result<Ball> {
        self.check(center)?;
        if radius.is_nan() || radius < 0.0 {
            return Err(Error::domain(format!("ball radius must be >= 0, got {radius}")));
        }
        let members = self
            .points()
            .filter(|&y| {
                let d = self.dist(center, y);
                match kind {
                    BallKind::Open => d < radius,
                    BallKind::Closed => self.leq(d, radius),
                }
            })
            .collect();
        Ok(Ball { center, radius, kind, members })
    }

    pub fn closed_ball(&self, center: Point, radius: f64) -> Result<PointSet> {
        self.ball(center, radius, BallKind::Closed).map(|b| b.members)
    }

    /// `sup d(x, y)` over the subset; `0` for the empty set.
    pub fn diameter(&self, subset: &PointSet) -> Result<f64> {
        Ok(self.farthest_pair(subset)?.map_or(0.0, |(_, _, d)| d))
    }

    /// The pair realizing the diameter, if the subset is nonempty.
    pub fn farthest_pair(&self, subset: &PointSet) -> Result<Option<(Point, Point, f64)>> {
        self.check_set(subset)?;
        let mut best: Option<(Point, Point, f64)> = None;
        for &x in subset {
            for &y in subset.range(x..) {
                let d = self.dist(x, y);
                if best.is_none_or(|(_, _, b)| d > b) {
                    best = Some((x, y, d));
                }
            }
        }
        Ok(best)
    }

    /// Sub-space on `subset`, re-indexed in point order.
    pub fn restrict(&self, subset: &PointSet) -> Result<ControlledSpace> {
        if subset.is_empty() {
            return Err(Error::domain("cannot restrict to an empty subset"));
        }
        self.check_set(subset)?;
        let idx: Vec<usize> = subset.iter().map(|p| p.0).collect();
        let pick = |t: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
            idx.iter().map(|&i| idx.iter().map(|&j| t[i][j]).collect()).collect()
        };
        let spec = SpaceSpec::new(
            idx.iter().map(|&i| self.spec.points[i].clone()).collect(),
            pick(&self.spec.dist),
            pick(&self.spec.alpha),
        )?;
        ControlledSpace::with_tolerance(spec, self.tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BallKind {
    Open,
    Closed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
    pub kind: BallKind,
    pub members: PointSet,
}

/// The space on `{1, …, n}` with
///
/// ```text
/// d(x,y) = 0 if x = y;  1/√x if x even, y odd;  1/√y if x odd, y even;  1 otherwise
/// α(x,y) = √x if x even, y odd;  √y if x odd, y even;  1 otherwise
/// ```
///
/// Points are labelled `"1"`…`"n"`, so `Point(i)` is the integer `i + 1`.
pub fn paper_example_spec(n: usize) -> Result<SpaceSpec> {
    if n < 2 {
        return Err(Error::domain(format!("example space needs N >= 2, got {n}")));
    }
    let even = |v: usize| v.is_multiple_of(2);
    let d = |x: usize, y: usize| -> f64 {
        if x == y {
            0.0
        } else if even(x) && !even(y) {
            1.0 / (x as f64).sqrt()
        } else if !even(x) && even(y) {
            1.0 / (y as f64).sqrt()
        } else {
            1.0
        }
    };
    let a = |x: usize, y: usize| -> f64 {
        if even(x) && !even(y) {
            (x as f64).sqrt()
        } else if !even(x) && even(y) {
            (y as f64).sqrt()
        } else {
            1.0
        }
    };
    let table = |f: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<f64>> {
        (1..=n).map(|x| (1..=n).map(|y| f(x, y)).collect()).collect()
    };
    SpaceSpec::new((1..=n).map(|i| i.to_string()).collect(), table(&d), table(&a))
}

/// Built example space; see [`paper_example_spec`].
pub fn paper_example(n: usize) -> Result<ControlledSpace> {
    ControlledSpace::new(paper_example_spec(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv_sqrt2() -> f64 {
        1.0 / 2f64.sqrt()
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    }

    fn ones(n: usize) -> Vec<Vec<f64>> {
        vec![vec![1.0; n]; n]
    }

    fn set(space: &ControlledSpace, ids: &[usize]) -> PointSet {
        ids.iter().map(|&i| space.point(&i.to_string()).unwrap()).collect()
    }

    #[test]
    fn example_space_is_valid() {
        let spec = paper_example_spec(10).unwrap();
        assert!(validate_axioms(&spec).is_valid());
    }

    #[test]
    fn single_point_space_is_valid() {
        let spec = SpaceSpec::new(labels(1), vec![vec![0.0]], ones(1)).unwrap();
        assert!(validate_axioms(&spec).is_valid());
        let space = build_space(spec).unwrap();
        assert_eq!(space.k(), 1.0);
        assert_eq!(space.min_positive_dist(), f64::INFINITY);
    }

    #[test]
    fn nonzero_diagonal_breaks_d1() {
        let spec =
            SpaceSpec::new(labels(2), vec![vec![0.5, 1.0], vec![1.0, 0.0]], ones(2)).unwrap();
        let result = validate_axioms(&spec);
        assert!(result
            .violations()
            .contains(&Violation::SelfDistance { x: Point(0), distance: 0.5 }));
    }

    #[test]
    fn long_edge_breaks_d3_with_witness() {
        // a = 0, b = 1, c = 2
        let dist = vec![vec![0.0, 10.0, 1.0], vec![10.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]];
        let spec = SpaceSpec::new(labels(3), dist, ones(3)).unwrap();
        let result = validate_axioms(&spec);
        assert!(!result.is_valid());
        assert!(result.violations().contains(&Violation::Triangle {
            x: Point(0),
            y: Point(1),
            z: Point(2),
            lhs: 10.0,
            rhs: 2.0,
        }));
        assert!(matches!(build_space(spec), Err(Error::Axioms(_))));
    }

    #[test]
    fn asymmetric_and_small_alpha_are_reported() {
        let spec = SpaceSpec::new(
            labels(2),
            vec![vec![0.0, 1.0], vec![2.0, 0.0]],
            vec![vec![1.0, 0.5], vec![1.0, 1.0]],
        )
        .unwrap();
        let v = validate_axioms(&spec);
        assert!(v.violations().iter().any(|v| matches!(v, Violation::Asymmetric { .. })));
        assert!(v.violations().iter().any(|v| matches!(v, Violation::ControlBelowOne { .. })));
    }

    #[test]
    fn shape_errors_are_distinct_from_violations() {
        assert!(matches!(
            SpaceSpec::new(labels(2), vec![vec![0.0, 1.0]], ones(2)),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            SpaceSpec::new(labels(2), vec![vec![0.0, -1.0], vec![-1.0, 0.0]], ones(2)),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            SpaceSpec::new(labels(1), vec![vec![0.0]], vec![vec![f64::NAN]]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(SpaceSpec::new(vec![], vec![], vec![]), Err(Error::Shape(_))));
        assert!(matches!(
            SpaceSpec::new(vec!["a".into(), "a".into()], ones(2), ones(2)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn k_of_example_spaces() {
        assert_eq!(paper_example(4).unwrap().k(), 2.0);
        assert_eq!(paper_example(9).unwrap().k(), 8f64.sqrt());
        let equilateral = vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]];
        let space = build_space(SpaceSpec::new(labels(3), equilateral, ones(3)).unwrap()).unwrap();
        assert_eq!(space.k(), 1.0);
        assert!(space.is_metric());
    }

    #[test]
    fn example_table_entries() {
        let space = paper_example(5).unwrap();
        let p = |i: usize| space.point(&i.to_string()).unwrap();
        assert_eq!(space.dist(p(2), p(3)), inv_sqrt2());
        assert_eq!(space.dist(p(3), p(2)), inv_sqrt2());
        assert_eq!(space.dist(p(2), p(4)), 1.0);
        assert_eq!(space.dist(p(4), p(3)), 0.5);
        assert_eq!(space.alpha(p(4), p(3)), 2.0);
        assert!(matches!(paper_example_spec(1), Err(Error::Domain(_))));
    }

    #[test]
    fn balls() {
        let space = paper_example(6).unwrap();
        let two = space.point("2").unwrap();
        let b = space.ball(two, 0.8, BallKind::Closed).unwrap();
        assert_eq!(b.members, set(&space, &[1, 2, 3, 5]));
        assert!(space.ball(two, 0.0, BallKind::Open).unwrap().members.is_empty());
        assert_eq!(
            space.ball(two, 0.0, BallKind::Closed).unwrap().members,
            set(&space, &[2])
        );
        assert!(matches!(space.ball(Point(6), 1.0, BallKind::Open), Err(Error::UnknownPoint(_))));
        assert!(matches!(space.ball(two, -1.0, BallKind::Open), Err(Error::Domain(_))));
    }

    #[test]
    fn diameters() {
        let s4 = paper_example(4).unwrap();
        assert_eq!(s4.diameter(&set(&s4, &[2, 3])).unwrap(), inv_sqrt2());
        assert_eq!(s4.diameter(&set(&s4, &[3])).unwrap(), 0.0);
        assert_eq!(s4.diameter(&PointSet::new()).unwrap(), 0.0);
        let s6 = paper_example(6).unwrap();
        assert_eq!(s6.diameter(&set(&s6, &[2, 4, 6])).unwrap(), 1.0);
        assert!(s4.diameter(&[Point(9)].into()).is_err());
    }

    #[test]
    fn restriction_matches_smaller_example() {
        let big = paper_example(10).unwrap();
        let small = big.restrict(&set(&big, &[1, 2, 3, 4, 5])).unwrap();
        assert_eq!(small, paper_example(5).unwrap());

        let single = big.restrict(&set(&big, &[4])).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single.k(), big.alpha(Point(3), Point(3)));
        assert!(matches!(big.restrict(&PointSet::new()), Err(Error::Domain(_))));
    }
}
