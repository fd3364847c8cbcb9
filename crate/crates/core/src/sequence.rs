//! Eventually-periodic sequences `x_1, x_2, …` over the points of a space,
//! stored as a finite prefix followed by a cycle repeated forever.
//!
//! Every asymptotic quantity here is exact: a value occurs infinitely often
//! iff it is in the cycle, so limits and limsups reduce to scans of the cycle.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{ControlledSpace, Point, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EpSequence {
    prefix: Vec<Point>,
    cycle: Vec<Point>,
}

impl EpSequence {
    pub fn new(prefix: Vec<Point>, cycle: Vec<Point>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::domain("sequence cycle must be nonempty"));
        }
        Ok(EpSequence { prefix, cycle })
    }

    pub fn periodic(cycle: Vec<Point>) -> Result<Self> {
        Self::new(Vec::new(), cycle)
    }

    pub fn constant(p: Point) -> Self {
        EpSequence { prefix: Vec::new(), cycle: vec![p] }
    }

    pub fn prefix(&self) -> &[Point] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Point] {
        &self.cycle
    }

    /// Errors if any referenced point lies outside `space`.
    pub fn check_in(&self, space: &ControlledSpace) -> Result<()> {
        for &p in self.prefix.iter().chain(&self.cycle) {
            space.check(p)?;
        }
        Ok(())
    }

    /// `x_n`, 1-based.
    pub fn eval(&self, n: usize) -> Result<Point> {
        if n == 0 {
            return Err(Error::domain("sequence indices start at 1"));
        }
        Ok(self.at(n))
    }

    pub(crate) fn at(&self, n: usize) -> Point {
        let p = self.prefix.len();
        if n <= p {
            self.prefix[n - 1]
        } else {
            self.cycle[(n - p - 1) % self.cycle.len()]
        }
    }

    /// Values that occur infinitely often.
    pub fn tail_values(&self) -> PointSet {
        self.cycle.iter().copied().collect()
    }

    /// Every value that occurs at least once.
    pub fn values(&self) -> PointSet {
        self.prefix.iter().chain(&self.cycle).copied().collect()
    }

    /// `limsup_n d(x_n, x)`, i.e. the largest distance from `x` to a cycle value.
    pub fn limsup_distance(&self, space: &ControlledSpace, x: Point) -> Result<f64> {
        space.check(x)?;
        self.check_in(space)?;
        Ok(self.limsup_unchecked(space, x))
    }

    pub(crate) fn limsup_unchecked(&self, space: &ControlledSpace, x: Point) -> f64 {
        self.cycle.iter().map(|&v| space.dist(v, x)).fold(0.0, f64::max)
    }

    /// The limit, if the sequence converges. In a finite space that happens
    /// exactly when the sequence is eventually constant.
    pub fn is_convergent(&self) -> Option<Point> {
        let first = self.cycle[0];
        self.cycle.iter().all(|&p| p == first).then_some(first)
    }

    pub fn is_cauchy(&self) -> bool {
        self.is_convergent().is_some()
    }

    pub fn boundedness(&self, space: &ControlledSpace) -> Result<BoundednessReport> {
        self.check_in(space)?;
        let values = self.values();
        let max = space.diameter(&values)?;
        Ok(BoundednessReport { bounded: true, bound: max + 1.0 })
    }

    /// `i ↦ x_{offset + (i-1)·stride}`, re-encoded as prefix + cycle.
    pub fn arithmetic_subsequence(&self, offset: usize, stride: usize) -> Result<EpSequence> {
        if offset == 0 || stride == 0 {
            return Err(Error::domain("offset and stride must be >= 1"));
        }
        let p = self.prefix.len();
        let c = self.cycle.len();
        let index = |i: usize| offset + (i - 1) * stride;

        let mut i = 1;
        let mut prefix = Vec::new();
        while index(i) <= p {
            prefix.push(self.at(index(i)));
            i += 1;
        }
        let period = c / gcd(c, stride);
        let cycle = (i..i + period).map(|j| self.at(index(j))).collect();
        Ok(EpSequence { prefix, cycle })
    }

    /// Shortest equivalent encoding: minimal cycle, minimal prefix.
    pub fn canonical(&self) -> EpSequence {
        let c = self.cycle.len();
        let period = (1..=c)
            .find(|&q| c.is_multiple_of(q) && (q..c).all(|i| self.cycle[i] == self.cycle[i - q]))
            .unwrap_or(c);
        let mut cycle: Vec<Point> = self.cycle[..period].to_vec();
        let mut prefix = self.prefix.clone();
        // Absorb trailing prefix entries that continue the cycle backwards.
        while let Some(&last) = prefix.last() {
            if last != cycle[period - 1] {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        EpSequence { prefix, cycle }
    }

    /// The first `n` terms.
    pub fn take(&self, n: usize) -> Vec<Point> {
        (1..=n).map(|i| self.at(i)).collect()
    }

    pub fn display<'a>(&'a self, space: &'a ControlledSpace) -> SeqDisplay<'a> {
        SeqDisplay { seq: self, space }
    }
}

pub struct SeqDisplay<'a> {
    seq: &'a EpSequence,
    space: &'a ControlledSpace,
}

impl fmt::Display for SeqDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ps: &[Point]| {
            ps.iter().map(|&p| self.space.label(p).to_string()).collect::<Vec<_>>().join(", ")
        };
        write!(f, "prefix = [{}], cycle = [{}]", join(&self.seq.prefix), join(&self.seq.cycle))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundednessReport {
    pub bounded: bool,
    /// Strict bound: `d(x_n, x_m) < bound` for all `n, m`.
    pub bound: f64,
}
