use digiq::SimError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    /// A config field, preset id or argument is invalid. Messages start with
    /// the offending field path.
    #[error("{0}")]
    Validation(String),
    /// The request exceeds a register or dense-matrix limit.
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Input(msg) => CliError::Validation(msg),
            SimError::Resource(msg) => CliError::Resource(msg),
        }
    }
}
