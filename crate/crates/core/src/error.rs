use thiserror::Error;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    /// Malformed or inconsistent arguments.
    #[error("invalid input: {0}")]
    Input(String),
    /// The requested dense representation exceeds the supported register size.
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(SimError::Input(msg.into()))
}
