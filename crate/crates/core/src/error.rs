use thiserror::Error;

use crate::space::{Point, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Tables do not match the point list, or hold values outside their domain.
    #[error("malformed space: {0}")]
    Shape(String),

    /// The tables are well-formed but break at least one axiom.
    #[error("space violates the controlled metric axioms ({} violation(s), first: {})", .0.len(), .0[0])]
    Axioms(Vec<Violation>),

    #[error("unknown point {0}")]
    UnknownPoint(Point),

    #[error("unknown point label `{0}`")]
    UnknownLabel(String),

    #[error("{0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
