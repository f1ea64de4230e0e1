use thiserror::Error;

/// Library-wide error type.
///
/// `Usage` means the caller handed in arguments that violate a precondition,
/// `Range` means a requested bound exceeds what the supplied tables cover,
/// and `Internal` flags an inconsistency detected inside the library itself
/// (these should never occur and map to a distinct process exit code).
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
