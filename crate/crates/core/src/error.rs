use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid cartan datum: {0}")]
    InvalidDatum(String),

    #[error("generator index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("parse error at token {position} ({token:?}): {reason}")]
    Parse { position: usize, token: String, reason: String },

    #[error("move not applicable: {0}")]
    InvalidMove(String),

    #[error("braid relation with infinite m_ij between {0} and {1}")]
    InfiniteRelation(usize, usize),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("mixed scalar fields")]
    MixedFields,

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("variable outside the shape's universe: {0}")]
    ForeignVariable(String),

    #[error("degree error: {0}")]
    Degree(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("internal arithmetic error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
