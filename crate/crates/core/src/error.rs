use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the operation's domain (bad exponent, index out
    /// of range, shape mismatch, zero polynomial where one is not allowed).
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input document.
    #[error("invalid input: {0}")]
    Format(String),

    /// A configured size cap would be exceeded.
    #[error("resource limit: {0}")]
    Resource(String),

    /// An identity or inequality that must hold failed beyond tolerance.
    /// This indicates a numerical or implementation fault, never bad input.
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }
}
