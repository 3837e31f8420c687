use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {n} exceeds the supported maximum of {max}")]
    DimensionOverflow { n: usize, max: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("domain error: {0}")]
    Domain(String),

    /// A floating-point comparison landed too close to a decision boundary.
    /// Re-run with exact rational weights.
    #[error("numerically indeterminate: {0}")]
    Indeterminate(String),

    #[error("degenerate threshold function: hyperplane passes through {witness:?}")]
    Degenerate { witness: Vec<i8> },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed container: {0}")]
    Format(String),

    #[error("enumeration strategies disagree: {0}")]
    StrategyDisagreement(String),

    #[error("catalog unavailable: {0}")]
    CatalogUnavailable(String),

    #[error("head of size {0} is too large for exact enumeration")]
    HeadTooLarge(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(n: usize, max: usize) -> Result<()> {
    if n > max {
        Err(Error::DimensionOverflow { n, max })
    } else {
        Ok(())
    }
}
