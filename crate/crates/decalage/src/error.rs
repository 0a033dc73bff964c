use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid document: {0}")]
    Invalid(decalage_core::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("verification refused: {0}")]
    Refused(String),
    #[error("methods disagree: {0}")]
    Disagreement(String),
    #[error("engine error: {0}")]
    Engine(#[from] decalage_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Invalid(_) | CliError::Usage(_) | CliError::Io(_) | CliError::Refused(_) => 2,
            CliError::Disagreement(_) => 3,
            CliError::Engine(_) => 4,
        }
    }
}
