use thiserror::Error;

use crate::cones::ConeError;
use crate::lp::LpError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what}: expected dimension {expected}, got {found}")]
    Dimension { what: &'static str, expected: usize, found: usize },
    #[error("ground set is empty")]
    EmptyGround,
    #[error("ground set has duplicate points {0} and {1}")]
    DuplicatePoint(usize, usize),
    #[error("map is not proper: every value is +inf")]
    Improper,
    #[error("subset mask selects no point")]
    EmptyMask,
    #[error("operator data has {found} entries, expected {expected}")]
    OperatorShape { expected: usize, found: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("no point of the constraint set is feasible for every scenario and in dom F")]
    EmptyFeasibleSet,
    #[error("instance has no scenarios")]
    NoScenarios,
    #[error("multiplier grid must contain the zero vector")]
    GridWithoutZero,
    #[error("certificate failed re-verification: {0}")]
    CertificateRejected(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

pub type Result<T> = std::result::Result<T, Error>;
