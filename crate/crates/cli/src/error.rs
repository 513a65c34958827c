//! Error type of the workbench and its mapping to process exit codes.

use thiserror::Error;

/// Convenience alias.
pub type Result<T> = std::result::Result<T, CliError>;

/// Failures of a workbench run.
#[derive(Debug, Error)]
pub enum CliError {
    /// The configuration file is missing, unreadable or invalid.
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    /// Writing an output file failed.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A library routine failed numerically.
    #[error("numerical failure: {0}")]
    Numerical(#[from] toda_birkhoff::Error),

    /// A self-check suite reported a failed property.
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl CliError {
    /// Builds a [`CliError::Config`] naming the offending field.
    pub fn config(field: &str, message: impl Into<String>) -> Self {
        Self::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Process exit code: 1 for configuration problems, 2 for everything
    /// that goes wrong after the configuration was accepted.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } => 1,
            Self::Io { .. } | Self::Numerical(_) | Self::CheckFailed(_) => 2,
        }
    }
}
