use thiserror::Error;

/// Failure modes shared by every numerical routine in the workspace.
///
/// The variant name is what surfaces in reports and on the command line,
/// so keep them stable.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("NonConvergence: {what} (after {terms} terms)")]
    NonConvergence { what: String, terms: usize },

    #[error("DomainError: {0}")]
    DomainError(String),

    #[error("PoleError: {0}")]
    PoleError(String),

    #[error("NegativeRadicand: {0}")]
    NegativeRadicand(String),

    #[error("QuadratureFailure: {0}")]
    QuadratureFailure(String),

    #[error("DimensionError: {0}")]
    DimensionError(String),

    #[error("NotDiagonal: off-diagonal entry {value:e} at ({row}, {col})")]
    NotDiagonal { row: usize, col: usize, value: f64 },

    #[error("ConfigError: {0}")]
    ConfigError(String),
}

impl QError {
    /// Bare variant name, e.g. `"PoleError"`.
    pub fn kind(&self) -> &'static str {
        match self {
            QError::NonConvergence { .. } => "NonConvergence",
            QError::DomainError(_) => "DomainError",
            QError::PoleError(_) => "PoleError",
            QError::NegativeRadicand(_) => "NegativeRadicand",
            QError::QuadratureFailure(_) => "QuadratureFailure",
            QError::DimensionError(_) => "DimensionError",
            QError::NotDiagonal { .. } => "NotDiagonal",
            QError::ConfigError(_) => "ConfigError",
        }
    }

    pub(crate) fn nonconv(what: impl Into<String>, terms: usize) -> Self {
        QError::NonConvergence { what: what.into(), terms }
    }
}

pub type Result<T, E = QError> = std::result::Result<T, E>;
