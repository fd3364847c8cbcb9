//! Random valid spaces and eventually-periodic sequences for fuzzing.
//!
//! Spaces are built constructively: draw a symmetric distance table, compute
//! the worst triangle ratio
//!
//! ```text
//! K = max over x ≠ y, z ∉ {x, y} of d(x,y) / (d(x,z) + d(z,y))
//! ```
//!
//! and set every control entry to `max(1, K)·(1 + noise)`. Since `α ≥ K`
//! pointwise, `α(x,z)d(x,z) + α(z,y)d(z,y) ≥ K·(d(x,z) + d(z,y)) ≥ d(x,y)`
//! and the result is valid without rejection sampling.

use rand::Rng;

use crate::sequence::EpSequence;
use crate::space::{Point, SpaceSpec};

/// Distribution of the off-diagonal distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceRegime {
    /// Uniform on `[0.5, 1]`: every triple satisfies the plain triangle inequality.
    Metric,
    /// Uniform on `[0.1, 1]`.
    Moderate,
    /// Log-uniform on `[0.01, 10]`; large `K`.
    Wide,
}

impl DistanceRegime {
    fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            DistanceRegime::Metric => rng.random_range(0.5..=1.0),
            DistanceRegime::Moderate => rng.random_range(0.1..=1.0),
            DistanceRegime::Wide => 10f64.powf(rng.random_range(-2.0..=1.0)),
        }
    }
}

/// Constructive space on `n ≥ 1` points labelled `"1"`…`"n"`.
///
/// `noisy = false` gives a constant control function (a b-metric space; an
/// ordinary metric space when `K ≤ 1`).
pub fn constructive_spec<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    regime: DistanceRegime,
    noisy: bool,
) -> SpaceSpec {
    assert!(n >= 1, "a space needs at least one point");
    let mut dist = vec![vec![0.0; n]; n];
    #[allow(clippy::needless_range_loop)]
    for x in 0..n {
        for y in x + 1..n {
            let d = regime.sample(rng);
            dist[x][y] = d;
            dist[y][x] = d;
        }
    }
    let base = triangle_ratio(&dist).max(1.0);
    let mut alpha = vec![vec![base; n]; n];
    if noisy {
        for a in alpha.iter_mut().flatten() {
            *a *= 1.0 + rng.random_range(0.0..1.0);
        }
    }
    SpaceSpec::new((1..=n).map(|i| i.to_string()).collect(), dist, alpha)
        .expect("generated tables are square and finite")
}

/// Random size, regime and noise.
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R, max_points: usize) -> SpaceSpec {
    let n = rng.random_range(1..=max_points.max(1));
    let regime = match rng.random_range(0..3) {
        0 => DistanceRegime::Metric,
        1 => DistanceRegime::Moderate,
        _ => DistanceRegime::Wide,
    };
    let noisy = rng.random_bool(0.75);
    constructive_spec(rng, n, regime, noisy)
}

fn triangle_ratio(dist: &[Vec<f64>]) -> f64 {
    let n = dist.len();
    let mut k = 0.0f64;
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            for z in 0..n {
                if z != x && z != y {
                    k = k.max(dist[x][y] / (dist[x][z] + dist[z][y]));
                }
            }
        }
    }
    k
}

fn random_points<R: Rng + ?Sized>(rng: &mut R, n: usize, len: usize) -> Vec<Point> {
    (0..len).map(|_| Point(rng.random_range(0..n))).collect()
}

pub fn random_sequence<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_prefix: usize,
    max_cycle: usize,
) -> EpSequence {
    let p = rng.random_range(0..=max_prefix);
    let c = rng.random_range(1..=max_cycle.max(1));
    let prefix = random_points(rng, n, p);
    let cycle = random_points(rng, n, c);
    EpSequence::new(prefix, cycle).expect("cycle is nonempty")
}

/// Eventually constant at a random point.
pub fn random_convergent<R: Rng + ?Sized>(rng: &mut R, n: usize, max_prefix: usize) -> EpSequence {
    let p = rng.random_range(0..=max_prefix);
    let prefix = random_points(rng, n, p);
    EpSequence::new(prefix, vec![Point(rng.random_range(0..n))]).expect("cycle is nonempty")
}

/// A cycle with at least two distinct values. Needs `n ≥ 2` and `max_cycle ≥ 2`.
pub fn random_nonconvergent<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_prefix: usize,
    max_cycle: usize,
) -> EpSequence {
    assert!(n >= 2 && max_cycle >= 2, "need two points and room for two cycle entries");
    let p = rng.random_range(0..=max_prefix);
    let c = rng.random_range(2..=max_cycle);
    let prefix = random_points(rng, n, p);
    let mut cycle = random_points(rng, n, c);
    if cycle.iter().all(|&q| q == cycle[0]) {
        let i = rng.random_range(0..c);
        cycle[i] = Point((cycle[0].0 + rng.random_range(1..n)) % n);
    }
    EpSequence::new(prefix, cycle).expect("cycle is nonempty")
}

/// A sequence whose tail stays inside `candidates`, with a random prefix.
pub fn random_sequence_within<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    candidates: &[Point],
    max_prefix: usize,
    max_cycle: usize,
) -> EpSequence {
    assert!(!candidates.is_empty());
    let p = rng.random_range(0..=max_prefix);
    let c = rng.random_range(1..=max_cycle.max(1));
    let prefix = random_points(rng, n, p);
    let cycle = (0..c).map(|_| candidates[rng.random_range(0..candidates.len())]).collect();
    EpSequence::new(prefix, cycle).expect("cycle is nonempty")
}
