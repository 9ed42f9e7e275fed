use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("index {index} out of range for a field of size {q}")]
    IndexOutOfRange { index: usize, q: usize },
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("singular curve (discriminant is zero)")]
    SingularCurve,
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("function has a pole of order {order} at {place}, beyond the expansion window")]
    PoleBeyondWindow { place: String, order: i64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed matrix file: {0}")]
    MalformedFile(String),
    #[error("digest mismatch: header says {expected}, content hashes to {actual}")]
    DigestMismatch { expected: String, actual: String },
    #[error("insufficient matrix depth: need {needed}, have {available}")]
    InsufficientDepth { needed: usize, available: usize },
    #[error("precision shortfall: rank {low} at precision {precision}, {high} at {doubled}")]
    PrecisionShortfall {
        low: usize,
        high: usize,
        precision: usize,
        doubled: usize,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
