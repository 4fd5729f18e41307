use std::path::PathBuf;

use thiserror::Error;

/// Failures of the command-line layer, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: cannot decode image: {message}")]
    Decode { path: PathBuf, message: String },

    #[error("{path}: malformed file: {message}")]
    Format { path: PathBuf, message: String },

    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error("dimension mismatch: {0}")]
    Dimensions(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(gbsp_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Decode { .. } | CliError::Format { .. } => 2,
            CliError::Schedule(_) => 3,
            CliError::Dimensions(_) => 4,
            CliError::Usage(_) | CliError::Core(_) => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<gbsp_core::Error> for CliError {
    fn from(err: gbsp_core::Error) -> Self {
        use gbsp_core::Error as E;
        match err {
            E::Schedule(v) => CliError::Schedule(v.to_string()),
            E::BudgetOverflow { .. } | E::WindowTooLarge { .. } => CliError::Schedule(err.to_string()),
            E::ImageMismatch(m) => CliError::Dimensions(m),
            other => CliError::Core(other),
        }
    }
}

impl From<gbsp_core::ScheduleViolation> for CliError {
    fn from(v: gbsp_core::ScheduleViolation) -> Self {
        CliError::Schedule(v.to_string())
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
