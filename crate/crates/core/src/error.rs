use thiserror::Error;

/// Errors raised by the verification toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimension {0} outside supported range 1..={max}", max = crate::gf2::MAX_AMBIENT)]
    AmbientTooLarge(usize),

    #[error("subspace of dimension {dim} exceeds enumeration limit {limit}")]
    EnumerationLimit { dim: usize, limit: u64 },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("edge set is not a subset of the graph: {0:?}")]
    NotSubset(Vec<u32>),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}
