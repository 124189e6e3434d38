use std::path::PathBuf;

use thiserror::Error;

use crate::bijection::WordViolation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed symbol `{0}`")]
    MalformedSymbol(String),

    #[error("operands belong to different variable tables")]
    MixedTables,

    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,

    #[error("malformed polynomial document: {0}")]
    PolyFormat(String),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("bad parameter binding: {0}")]
    BadParameter(String),

    #[error("{what} = {got} exceeds the exhaustive-enumeration guard of {limit}")]
    GuardExceeded {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("{0} is not a triangular number")]
    NotTriangular(u64),

    #[error("vertex ({0}, {1}) is not in the network")]
    NoSuchVertex(usize, usize),

    #[error("source and sink selections differ in size ({0} vs {1})")]
    SelectionMismatch(usize, usize),

    #[error("path budget of {0} exhausted during enumeration")]
    PathBudget(usize),

    #[error("invalid word: {0}")]
    InvalidWord(WordViolation),

    #[error("matrix is not numeric: entry ({0}, {1}) contains indeterminates")]
    NotNumeric(usize, usize),

    #[error("requested size {n} exceeds triangle of {rows} rows")]
    SizeOutOfRange { n: usize, rows: usize },

    #[error("budget must be positive")]
    NonPositiveBudget,

    #[error("checkpoint {path} does not match the supplied matrix")]
    DigestMismatch { path: PathBuf },

    #[error("corrupt checkpoint: {0}")]
    CorruptCheckpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
