use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index:?} out of range for dimension {dim}")]
    IndexOutOfRange { index: [usize; 4], dim: usize },

    #[error("tensor dimension must be positive")]
    ZeroDimension,

    #[error("mixed form needs 0 <= k <= 4, got {0}")]
    MixedOrder(usize),

    #[error("expected {expected} raw entries, found {found}")]
    EntryCount { expected: usize, found: usize },

    #[error("negative radicand in square-root comparison")]
    NegativeRadicand,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("input does not match the {family} hypothesis pattern: {reason}; use the numeric oracle")]
    PatternMismatch { family: &'static str, reason: String },

    #[error("numeric oracle supports dimensions 2 and 3, got {0}")]
    UnsupportedDimension(usize),

    #[error("invalid oracle configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
