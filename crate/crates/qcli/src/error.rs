use qcore::QError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("UnknownFunction: {0} (run `qlab eval --list` for the registry)")]
    UnknownFunction(String),

    #[error("ArgumentError: {key}: {msg}")]
    ArgumentError { key: String, msg: String },

    #[error("ConfigError: {0}")]
    Config(String),

    #[error(transparent)]
    Library(#[from] QError),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),

    #[error("cannot serialize report: {0}")]
    Json(#[from] serde_json::Error),

    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn arg(key: &str, msg: impl Into<String>) -> Self {
        CliError::ArgumentError { key: key.to_string(), msg: msg.into() }
    }

    /// 2 for anything the caller got wrong, 1 for failures of the computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownFunction(_) | CliError::ArgumentError { .. } | CliError::Config(_) => 2,
            CliError::Library(QError::ConfigError(_)) => 2,
            CliError::Library(_) | CliError::Io(_) | CliError::Json(_) | CliError::Csv(_) => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
