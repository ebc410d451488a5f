use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by a non-unit series")]
    NonUnit,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("truncation loss: {0}")]
    TruncationLoss(String),
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("inconsistent system at {0}")]
    Inconsistent(String),
    #[error("underdetermined system: {0}")]
    Underdetermined(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
