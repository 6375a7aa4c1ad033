use std::path::PathBuf;

use tad_core::TadError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: unreadable or malformed file, invalid value, bad argument.
    #[error("{stage}: {message}")]
    Validation { stage: &'static str, message: String },

    #[error("{stage}: {source}")]
    Core {
        stage: &'static str,
        #[source]
        source: TadError,
    },

    #[error("writing {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn validation(stage: &'static str, message: impl Into<String>) -> Self {
        CliError::Validation {
            stage,
            message: message.into(),
        }
    }

    pub fn core(stage: &'static str, source: TadError) -> Self {
        CliError::Core { stage, source }
    }

    /// 2 for validation failures, 3 for numerical failures, 1 for output errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => 2,
            CliError::Core { source, .. } if source.is_validation() => 2,
            CliError::Core { .. } => 3,
            CliError::Write { .. } => 1,
        }
    }
}
