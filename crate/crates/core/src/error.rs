use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported degree {degree} (maximum {max})")]
    UnsupportedDegree { degree: usize, max: usize },

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("frequency {xi} is outside Omega_n for n = {n}")]
    FrequencyOutOfRange { xi: i64, n: usize },

    #[error("frequency {xi} needs truncation at least {needed}, sequence stops at {xi_max}")]
    InsufficientTruncation { xi: i64, needed: usize, xi_max: usize },

    #[error("symbol has no boundary limit")]
    MissingLimit,

    #[error("generator precondition failed: {0}")]
    GeneratorPrecondition(String),

    #[error("not separable by construction: {0}")]
    NotSeparable(String),

    #[error("angular aliasing: {required} nodes required, {got} given")]
    Aliasing { required: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("separation failed: gap {gap:e} is below the 1e-8 threshold")]
    SeparationFailed { gap: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
