use thiserror::Error;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input could not be read as an exact number.
    #[error("parse error: {0}")]
    Parse(String),
    /// Inputs parsed but lie outside the range where the formula applies.
    #[error("{0}")]
    Domain(String),
    /// Two independent routes to the same quantity disagreed.
    #[error("disagreement: {0}")]
    Disagreement(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Domain(_) => 3,
            Error::Disagreement(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
