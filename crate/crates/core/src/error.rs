//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} does not fit in 62 bits")]
    ModulusTooLarge(u64),
    #[error("division by zero in GF(p)")]
    DivisionByZero,
    #[error("the zero vector does not define a curve")]
    ZeroCurve,
    #[error("duplicate point ({0}, {1})")]
    DuplicatePoint(u64, u64),
    #[error("duplicate curve at index {0}")]
    DuplicateCurve(usize),
    #[error("{what} exceeds the {limit} guard (got {got})")]
    GuardExceeded {
        what: &'static str,
        limit: u64,
        got: u64,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
