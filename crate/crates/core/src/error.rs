use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("homomorphism is not well defined: {0}")]
    NotWellDefined(String),
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),
    #[error("invalid map description: {0}")]
    InvalidMap(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("ladder does not commute: {0}")]
    NonCommuting(String),
    #[error("cone oracle undefined on {0}")]
    ConeUndefined(String),
    #[error("stage {0} out of range")]
    StageOutOfRange(usize),
    #[error("{0}")]
    Parse(String),
    #[error("unknown scenario: {0}")]
    UnknownScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
