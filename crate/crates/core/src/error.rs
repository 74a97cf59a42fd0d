use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument violated a documented precondition (index range, kind or
    /// field mismatch, degree mismatch, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("division by zero")]
    DivisionByZero,

    /// A dense computation would exceed the configured dimension bound.
    #[error("resource bound exceeded: dimension {required} > bound {bound}")]
    Resource { required: usize, bound: usize },

    /// An input violated a semantic contract, e.g. a non-idempotent was passed
    /// where an idempotent is required.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn arg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
