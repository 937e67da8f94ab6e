use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("divisor must be a positive integer")]
    ZeroDivisor,
    #[error("cannot take the mean of an empty sequence")]
    EmptyInput,
    #[error("vector lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("number of parts must be at least 1")]
    ZeroParts,
}

pub type Result<T> = std::result::Result<T, Error>;
