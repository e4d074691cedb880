use std::fmt;

use thiserror::Error;

/// Location-tagged diagnostic produced by the circuit text parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("invalid qubit selection: {0}")]
    InvalidQubits(String),

    #[error(
        "operator is positive semidefinite (min eigenvalue {min_eigenvalue:e}); not a witness"
    )]
    NotAWitness { min_eigenvalue: f64 },

    #[error("no mirrored witness exists: {0}")]
    NoMirror(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("parse error at {0}")]
    Parse(#[from] ParseError),

    #[error("device has {available} physical qubits but {needed} are required")]
    InsufficientQubits { needed: usize, available: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("tolerance violated: {0}")]
    Tolerance(String),

    #[error("malformed document: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
