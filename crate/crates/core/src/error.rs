use thiserror::Error;

/// Errors produced by the thin-film laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine could not reach its accuracy target.
    #[error("numeric failure: {what} (achieved error estimate {estimate:e})")]
    NumericFailure { what: String, estimate: f64 },

    /// The requested engine or family does not support this configuration.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The caller combined inputs that do not belong together.
    #[error("usage error: {0}")]
    Usage(String),

    /// A string tag or document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn numeric(what: impl Into<String>, estimate: f64) -> Self {
        Error::NumericFailure {
            what: what.into(),
            estimate,
        }
    }
}

impl Error {
    /// Process exit code: 1 for bad input, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericFailure { .. } => 2,
            _ => 1,
        }
    }
}
