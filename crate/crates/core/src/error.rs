use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field error: {0}")]
    Field(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid graded space: {0}")]
    InvalidSpace(String),
    #[error("invalid permutation: {0}")]
    Permutation(String),
    #[error("signature {0} outside the truncation profile")]
    OutsideTruncation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("truncation overflow: {0}")]
    Overflow(String),
    #[error("not well defined: {0}")]
    NotWellDefined(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
