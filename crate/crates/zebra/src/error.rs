use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZebraError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("model requires a perfect matching M0")]
    MissingMatching,
    #[error("index {index} out of range 0..={len}")]
    OutOfRange { index: usize, len: usize },
    #[error("matchings share the edge {0:?}")]
    SharedEdge((usize, usize)),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, ZebraError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(ZebraError::InvalidInput(msg.into()))
}
