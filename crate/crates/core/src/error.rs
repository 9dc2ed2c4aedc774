use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("precision overflow: {0}")]
    PrecisionOverflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by non-monic polynomial {0}")]
    NonMonic(String),
    #[error("not preparable: {0}")]
    NotPreparable(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("inconsistent fixture: {0}")]
    Inconsistent(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
