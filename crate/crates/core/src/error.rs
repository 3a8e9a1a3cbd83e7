use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the operation's domain (index out of range,
    /// empty gap, mismatched dimensions, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A value cannot be represented at the instance's fixed-point precision.
    #[error("precision error: {0}")]
    Precision(String),

    /// A sign or normalization convention was violated.
    #[error("convention error: {0}")]
    Convention(String),

    /// A data-structure invariant does not hold. Reaching this from a public
    /// constructor means the input was malformed; reaching it from an
    /// internal pass means a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A configured resource cap (qubit count, matrix dimension) was exceeded.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A promise the caller was required to uphold does not hold.
    #[error("promise violated: {0}")]
    Promise(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$variant(format!($($arg)*)))
    };
}
pub(crate) use bail;
