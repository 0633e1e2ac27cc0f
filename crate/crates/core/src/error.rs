use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unsupported matrix dimension {0} (expected 2, 4 or 8)")]
    UnsupportedDimension(usize),
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    NotUnitTrace(f64),
    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("invalid subsystem layout: {0}")]
    Subsystems(&'static str),
    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("{name} must be > 0, got {value}")]
    NotPositiveParam { name: &'static str, value: f64 },
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("post-selection has vanishing success weight {0:e}")]
    DegeneratePostSelection(f64),
    #[error("Kraus set violates completeness by {0:e}")]
    Incomplete(f64),
    #[error("need at least 3 samples, got {0}")]
    TooFewPoints(usize),
    #[error("time grid is not uniform")]
    NonUniformGrid,
    #[error("invalid time grid: {0}")]
    Grid(&'static str),
    #[error("sweep has no values")]
    EmptySweep,
    #[error("alpha must be >= 1, got {0}")]
    Alpha(f64),
    #[error("Jacobi iteration did not converge")]
    NoConvergence,
}

/// Range check helper used by every constructor taking a unit-interval parameter.
pub(crate) fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<f64> {
    if value.is_finite() && value >= min && value <= max {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            min,
            max,
        })
    }
}
