use thiserror::Error;

/// Errors reported by the simulation core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported matrix dimension {0} (expected 2, 4 or 8)")]
    InvalidDimension(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("tensor product dimension {0} exceeds 8")]
    DimensionOverflow(usize),
    #[error("matrix is not Hermitian (max entrywise deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace deviates from one by {0:e}")]
    NonUnitTrace(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("eigensolver did not converge")]
    NoConvergence,
    #[error("invalid subsystem selection for partial trace")]
    InvalidSubsystem,
    #[error("Bloch vector norm {0} exceeds 1")]
    BlochNormTooLarge(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("all outcome probabilities vanish")]
    DegenerateInput,
    #[error("outcome {0} has zero probability for this input")]
    ZeroProbabilityOutcome(&'static str),
    #[error("zero total counts in a complementary pair")]
    EmptyCountPair,
}

pub type Result<T> = core::result::Result<T, Error>;
