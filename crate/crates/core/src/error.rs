use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A mathematical precondition does not hold (e.g. log of a series whose
    /// constant term is not one).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("not a Lie element: residual on word {word} (degree {degree})")]
    NotLieElement { degree: usize, word: String },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("matrix logarithm branch error: {0}")]
    Branch(String),

    #[error("transverse field is zero: the Trotter direction is frozen and the inter-layer coupling is undefined")]
    FrozenTrotter,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
