use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("field mismatch between operands")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("codes are not orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("characteristic {0} is not supported here (need 2)")]
    Characteristic(u32),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("decoding failed: {0}")]
    DecodeFailure(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("multiplication property fails (dims L^r={lr}, W={w}, sum={sum})")]
    MultiplicationProperty { lr: usize, w: usize, sum: usize },
    #[error("serialization: {0}")]
    Serde(String),
    #[error("not found: {0}")]
    NotFound(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
