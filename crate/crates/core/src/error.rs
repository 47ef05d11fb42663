use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("polynomial {poly:?} is not irreducible over F_{p}")]
    Reducible { p: u32, poly: Vec<u32> },
    #[error("factor index {index} out of range ({count} factors)")]
    FactorIndex { index: usize, count: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree {m} does not divide {n}")]
    NotDivisor { m: usize, n: usize },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("size guard exceeded: {what} needs {size}, limit {limit}")]
    Guard { what: &'static str, size: u128, limit: u128 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
