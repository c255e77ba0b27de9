use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported for this distribution: {0}")]
    Unsupported(String),

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("characteristic function is not nonnegative: {0}")]
    NegativeCharfn(String),

    #[error("insufficient statistical power: {0}")]
    InsufficientPower(String),

    #[error("report stream mixes runs: expected {expected}, found {found}")]
    RunMismatch { expected: String, found: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
