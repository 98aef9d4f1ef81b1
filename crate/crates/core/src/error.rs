use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller violated an operation's precondition.
    #[error("usage error: {0}")]
    Usage(String),
    #[error("unknown scale tag `{0}`")]
    UnknownScale(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("not a chain at scale `{scale}`: ({from}, {to}) are not related")]
    NotAChain { scale: String, from: String, to: String },
    #[error("illegal move {mv}: {reason}")]
    IllegalMove { mv: String, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
