use std::fmt;
use std::process::ExitCode;

use polyberg_core::Error;

/// Error with its exit status: 1 verification, 2 usage/input, 3 numeric
/// or invariant.
#[derive(Debug)]
pub enum Failure {
    Verification(String),
    Usage(String),
    Numeric(String),
}

impl Failure {
    pub fn code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 3,
        })
    }

    /// For library errors raised while checking data that already parsed.
    pub fn invariant(e: Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => Failure::Usage(msg),
            other => Failure::Numeric(other.to_string()),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verification(msg) => write!(f, "verification failed: {msg}"),
            Failure::Usage(msg) => write!(f, "{msg}"),
            Failure::Numeric(msg) => write!(f, "{msg}"),
        }
    }
}
