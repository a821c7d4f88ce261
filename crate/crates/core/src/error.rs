use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to
/// name the offending object in a report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element `{0}` is not in the carrier")]
    Domain(String),
    #[error("signature mismatch: [{left}] vs [{right}]")]
    SignatureMismatch { left: String, right: String },
    #[error("invalid signature: {0}")]
    Signature(String),
    #[error("invalid structure: {0}")]
    Structure(String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("construction aborted: {0}")]
    Construction(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
