use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero: |divisor| = {magnitude:e} is below the threshold {threshold:e}")]
    DivisionByZero { magnitude: f64, threshold: f64 },

    #[error("f must be nonzero for an f-circulant structure")]
    ZeroF,

    #[error("matrix is singular: transform value {index} has magnitude {magnitude:e}")]
    Singular { index: usize, magnitude: f64 },

    #[error("malformed {kind} data: expected {expected} parameters, got {got}")]
    DataLength {
        kind: String,
        expected: usize,
        got: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported structure: {0}")]
    Unsupported(String),

    #[error("invalid sparsity pattern: {0}")]
    InvalidPattern(String),

    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("JSON syntax error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("subsets violate the triple product property")]
    TripleProductViolation,

    #[error("zero factor vector in term {0}")]
    ZeroFactor(usize),

    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
