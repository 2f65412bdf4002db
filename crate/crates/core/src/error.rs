use crate::channel::ValidationReport;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least {min}, got {found}")]
    DimensionTooSmall { min: usize, found: usize },

    #[error("not a valid phase-damping channel: {0}")]
    InvalidChannel(ValidationReport),

    #[error("not a valid density matrix: {reason}")]
    InvalidState { reason: &'static str },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("{name} = {value} outside of [{lower}, {upper}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("weights must be nonnegative and sum to one (sum = {sum})")]
    InvalidWeights { sum: f64 },

    #[error("input must not be empty")]
    Empty,

    #[error("matrix is not an isometry (defect {defect:e})")]
    NotIsometry { defect: f64 },

    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("sub-simplex search needs rank^2 < N (rank {rank}, N {n})")]
    NoSubmatrices { rank: usize, n: usize },

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
