use thiserror::Error;

/// CLI failure, classified by its exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<polent::Error> for CliError {
    fn from(e: polent::Error) -> Self {
        match e {
            polent::Error::Internal(msg) => CliError::Internal(msg),
            other => CliError::Domain(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
