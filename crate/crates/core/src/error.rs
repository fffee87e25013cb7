use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported rule: {requested} points (supported: {supported:?})")]
    UnsupportedRule { requested: usize, supported: Vec<usize> },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("incompatible data: {0}")]
    Incompatible(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("zero norm: {0}")]
    ZeroNorm(String),
    #[error("truncation failure: {0}")]
    Truncation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
