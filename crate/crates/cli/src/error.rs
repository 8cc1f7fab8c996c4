use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable inputs, sizes beyond a cutoff: exit 2.
    #[error("{0}")]
    Usage(String),
    /// A comparison disagreed: exit 1.
    #[error("{0}")]
    Mismatch(String),
    #[error(transparent)]
    Core(#[from] asmtree::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
