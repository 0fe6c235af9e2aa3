use thiserror::Error;

/// Errors raised by the numeric library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A sample or partial result was not finite. `at` names the node or
    /// lattice index that produced it.
    #[error("numeric overflow at {at}: {detail}")]
    NumericOverflow { at: String, detail: String },

    #[error("pole proximity at {at}: |denominator| = {magnitude:e}")]
    PoleProximity { at: String, magnitude: f64 },

    /// The discretization cannot deliver the requested accuracy.
    #[error("accuracy error: {reason}")]
    Accuracy { reason: String, diagnostics: Vec<(String, f64)> },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
