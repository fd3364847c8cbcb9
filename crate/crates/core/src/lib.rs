//! Controlled metric type spaces over finite point sets, exact rough limit
//! sets of eventually-periodic sequences, and executable checks of the
//! rough-convergence theorems with a seeded fuzz harness.
//!
//! ```
//! use roughmetric::{paper_example, rough_limit_set, EpSequence, Point};
//!
//! let space = paper_example(10).unwrap();
//! // 2, 3, 2, 3, ...  (labels 2 and 3 are points #1 and #2)
//! let xi = EpSequence::periodic(vec![Point(1), Point(2)]).unwrap();
//! let lim = rough_limit_set(&xi, &space, 1.0 / 2f64.sqrt()).unwrap();
//! assert_eq!(lim.members.len(), 2);
//! ```

pub mod error;
pub mod exec;
pub mod expr;
pub mod io;
pub mod rough;
pub mod sequence;
pub mod space;
pub mod theorems;

pub use error::{Error, Result};
pub use exec::Execution;
pub use rough::{
    cluster_points, critical_roughness, derived_set, is_rough_limit, limsup_profile,
    rough_limit_set, CriticalRoughness, RoughLimitSet,
};
pub use sequence::{BoundednessReport, EpSequence};
pub use space::{
    build_space, paper_example, paper_example_spec, validate_axioms, validate_axioms_with, Ball,
    BallKind, ControlledSpace, Point, PointSet, SpaceSpec, ValidationResult, Violation,
    DEFAULT_TOLERANCE,
};
pub use theorems::fuzz::{fuzz, fuzz_with, FuzzConfig, FuzzSummary};
pub use theorems::{run_all, TheoremId, TheoremReport, Verdict};
