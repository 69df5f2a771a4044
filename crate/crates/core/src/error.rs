use thiserror::Error;

/// Errors raised by the verification and classification routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension {0} is not supported (expected 1..=16)")]
    Dimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a permutation of {0} coordinates")]
    NotAPermutation(usize),
    #[error("operation requires a nonempty vertex set")]
    EmptySet,
    #[error("vertex set must be a proper nonempty subset of the cube")]
    NotProper,
    #[error("invalid hex word {word:?} for n = {n}")]
    Hex { word: String, n: usize },
    #[error("partition is not equitable: vertex {vertex:#x} breaks the {cell} row")]
    NotEquitable { vertex: u32, cell: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
