use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("merit factor is undefined for a length-1 sequence")]
    MeritFactorUndefined,

    #[error("unsupported {family} length {len}: {constraint}")]
    UnsupportedLength {
        family: &'static str,
        len: usize,
        constraint: &'static str,
    },

    #[error("{path}: {msg}")]
    Format { path: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
