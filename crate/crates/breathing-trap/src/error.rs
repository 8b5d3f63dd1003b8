//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Operands do not have compatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A parameter violates its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The integrator or an evaluated function produced a NaN or infinity,
    /// usually a sign of a step size too large for the problem.
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    /// The eigensolver failed to meet its residual contract.
    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    /// A state vector was expected to have unit norm.
    #[error("state is not normalized (norm = {norm:.3e})")]
    NotNormalized { norm: f64 },

    /// An all-zero state where a nonzero one is required.
    #[error("zero state")]
    ZeroState,

    /// A sample point lies outside the valid domain.
    #[error("sample out of domain: {0}")]
    OutOfDomain(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for bad arguments, 3 for numerical
    /// failures, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_)
            | Error::DimensionMismatch(_)
            | Error::OutOfDomain(_)
            | Error::NotNormalized { .. }
            | Error::ZeroState => 2,
            Error::NonFinite(_) | Error::Eigensolver(_) => 3,
            Error::Io(_) | Error::Json(_) => 1,
        }
    }
}
