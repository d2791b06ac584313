use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    /// An enumeration or product would exceed a configured resource bound.
    #[error("{what} needs {requested} states, over the bound of {limit}")]
    BoundExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("operands live on different spaces")]
    SpaceMismatch,

    /// The operation needs a point map on a finite table, but got a
    /// symbolic or relational backend.
    #[error("unsupported backend: {0}")]
    Backend(String),

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("lifted map leaves the enumerated state set: {0}")]
    NotInvariant(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
