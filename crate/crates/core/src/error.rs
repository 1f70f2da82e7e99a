use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numeric failure: {message} (residual {residual:e})")]
    NumericFailure { message: String, residual: f64 },

    /// Outcome 1 was drawn while the post-measurement state has (numerically) no mass left.
    #[error("numerically impossible branch at step {step}: |PU psi| = {norm:e}")]
    ImpossibleBranch { step: usize, norm: f64 },
}

impl Error {
    pub(crate) fn numeric(message: impl Into<String>, residual: f64) -> Self {
        Error::NumericFailure {
            message: message.into(),
            residual,
        }
    }

    /// True for errors caused by bad caller input rather than numerical breakdown.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::NumericFailure { .. } | Error::ImpossibleBranch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
