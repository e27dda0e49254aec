use dsg_core::DsgError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Args(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Privacy(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    /// Process exit code: 2 bad arguments, 3 bad input, 4 infeasible privacy
    /// parameters, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Args(_) => 2,
            CliError::Input(_) => 3,
            CliError::Privacy(_) => 4,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<DsgError> for CliError {
    fn from(e: DsgError) -> Self {
        let msg = e.to_string();
        match e {
            DsgError::InfeasiblePrivacy(_) => CliError::Privacy(msg),
            DsgError::SelfLoop(_)
            | DsgError::DuplicateEdge(..)
            | DsgError::VertexOutOfRange { .. }
            | DsgError::Parse { .. }
            | DsgError::Io(_)
            | DsgError::TooLarge { .. } => CliError::Input(msg),
            DsgError::InvalidParameter { .. } | DsgError::ZeroNoiseNotEnabled => {
                CliError::Args(msg)
            }
            _ => CliError::Internal(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
