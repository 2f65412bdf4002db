use std::io;
use std::path::Path;

use dephasing_core::ValidationReport;

/// Failures of the command-line harness, each with a stable exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid channel: {0}")]
    Invalid(ValidationReport),

    #[error("numerical failure: {0}")]
    Numeric(#[from] dephasing_core::Error),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 0 success, 1 I/O or configuration, 2 parse, 3 validation, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Numeric(_) => 4,
            CliError::Config(_) | CliError::Io { .. } => 1,
        }
    }
}
