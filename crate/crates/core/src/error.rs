use thiserror::Error;

/// Errors raised by the measurement-space toolkit.
///
/// Every variant names the invariant that was violated so that front ends can
/// surface it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state norm deviation {deviation:e} exceeds tolerance {tolerance:e}")]
    NotNormalized { deviation: f64, tolerance: f64 },

    #[error("completeness deviation {deviation:e} exceeds tolerance {tolerance:e}")]
    Incomplete { deviation: f64, tolerance: f64 },

    #[error("matrix is not hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("subsystem index {index} out of range for {count} subsystems")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("invalid bipartite split: {0}")]
    InvalidSplit(String),

    #[error("duplicate measurement label {0:?}")]
    DuplicateLabel(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("value {value} outside admissible range [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },

    #[error("measurement-space state has no bipartite structure; supply an explicit factorization")]
    NoBipartiteStructure,

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
