//! Crate-wide error type.

/// Errors produced by the library.
///
/// `Invalid` covers every rejected construction or contract violation
/// (bad generator polynomials, length mismatches, non-finite LLRs, ...).
/// `Io` and `Json` only occur on the sweep/config file boundary.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
