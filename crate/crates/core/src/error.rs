use std::fmt;

use thiserror::Error;

/// Errors raised by the articulation toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The screws of one sequence do not share a single axis.
    #[error("model violation: {0}")]
    ModelViolation(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    /// Optimization produced a non-finite loss. Carries the last finite iterate.
    #[error("non-finite loss at iteration {iteration}")]
    NonFinite {
        iteration: usize,
        last_valid: Box<crate::artmodel::ArticulationModel>,
    },

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl fmt::Display) -> Self {
        Error::InvalidArgument(msg.to_string())
    }
}
