use thiserror::Error;

/// Structured errors for every decision procedure in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate Gram matrix (zero determinant)")]
    DegenerateGram,

    #[error("unsupported surface: {0}")]
    UnsupportedSurface(String),

    #[error("not a realizable invariant: {0}")]
    UnrealizableInvariant(String),

    #[error("class is not effective: {0}")]
    NotEffective(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cycle is not anti-invariant")]
    NotAntiInvariant,

    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
}
