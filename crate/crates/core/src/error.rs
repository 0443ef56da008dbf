use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("operator is not invertible at tolerance {tol}: numerical rank {rank} of {full}")]
    NotInvertible { rank: usize, full: usize, tol: f64 },

    #[error("phase-space grid violates declared bounds: {0}")]
    GridBounds(String),

    #[error("quadrature configuration too coarse: {0}")]
    Quadrature(String),

    #[error("moment conjugacy violated beyond tolerance: residual {0:.3e}")]
    ConjugacyViolation(f64),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("memory guard: dimension {dim} exceeds limit {limit} for the forward map")]
    MemoryGuard { dim: usize, limit: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
