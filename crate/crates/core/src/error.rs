use alloc::string::String;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("p must be an odd prime > 3 (got {0})")]
    InvalidPrime(u64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no inverse: zero has no multiplicative inverse")]
    NoInverse,
    #[error("invalid binomial: lower index exceeds upper index")]
    InvalidBinomial,
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("element is not parity-homogeneous: split by parity first")]
    MixedParity,
    #[error("element is not Z-degree homogeneous")]
    NotHomogeneous,
    #[error("vector does not lie in the subspace")]
    NotInSubspace,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vectors are linearly dependent")]
    DependentBasis,
    #[error("inconsistent grading: {0}")]
    InconsistentGrading(String),
    #[error("matrix entry ({row}, {col}) is out of range or duplicated")]
    BadEntry { row: usize, col: usize },
    #[error("independent computations disagree: {0}")]
    RouteMismatch(String),
}

pub type Result<T, E = AlgebraError> = core::result::Result<T, E>;
