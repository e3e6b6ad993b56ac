use thiserror::Error;

use crate::algebra::RepresentationKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lambda must lie strictly inside (-1, 0), got {0}")]
    LambdaOutOfRange(String),
    #[error("representation mismatch: {left} vs {right}")]
    KindMismatch { left: RepresentationKind, right: RepresentationKind },
    #[error("basis index {index} is not in the index set of the {kind} representation")]
    IndexOutOfRange { kind: RepresentationKind, index: i64 },
    #[error("J does not have a polynomial commutation rule in the {0} representation")]
    JNotReducible(RepresentationKind),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: String },
    #[error("margin {margin} must be smaller than dimension {dim}")]
    MarginTooLarge { margin: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("operation not supported for the {kind} representation: {reason}")]
    UnsupportedKind { kind: RepresentationKind, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
