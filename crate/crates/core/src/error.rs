use num_bigint::BigInt;
use thiserror::Error;

use crate::lattice::{LatticeError, LatticeVector};

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("expected {expected} vertices, got {got}")]
    VertexCount { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate: the vertices are affinely dependent")]
    Degenerate,
    #[error("origin-not-interior: the origin is not in the strict interior")]
    OriginNotInterior,
    #[error("non-primitive-vertex: {0}")]
    NonPrimitiveVertex(LatticeVector),
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("weights are not reduced (gcd {0})")]
    NotReduced(BigInt),
    #[error("weights are not well-formed")]
    NotWellFormed,
    #[error("multiplicity must be positive")]
    NonPositiveMultiplicity,
    #[error("operation requires multiplicity 1, got {0}")]
    MultiplicityNotOne(BigInt),
    #[error("height function is not primitive")]
    NotPrimitive,
    #[error("factor does not lie at height 0")]
    FactorNotAtHeightZero,
    #[error("not a factor at height {0}")]
    NotAFactor(BigInt),
    #[error("mutation cannot preserve multiplicity")]
    CannotPreserveMultiplicity,
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for failures caused by a computation exceeding a size limit
    /// rather than by invalid input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::TooLarge(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
