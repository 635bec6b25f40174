use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

/// Failures that stop a whole run. Per-query failures become error rows
/// instead.
#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad flags or parameter values.
    #[error("{0}")]
    Config(String),

    /// An input file is missing or malformed.
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        #[source]
        source: citediv::Error,
    },

    #[error("{0}")]
    Data(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    pub fn config(msg: impl Into<String>) -> Self {
        HarnessError::Config(msg.into())
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.to_path_buf(), source }
    }

    pub fn input(path: &Path, source: citediv::Error) -> Self {
        match source {
            citediv::Error::Io(e) => HarnessError::io(path, e),
            other => HarnessError::Input { path: path.to_path_buf(), source: other },
        }
    }

    /// 1 for configuration errors, 2 for data errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            _ => 2,
        }
    }
}
