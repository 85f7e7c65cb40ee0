use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("invalid weights: {0}")]
    Weights(#[from] owl_core::WeightError),
    #[error(transparent)]
    Core(owl_core::Error),
    #[error("failed to write report: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<owl_core::Error> for CliError {
    fn from(e: owl_core::Error) -> Self {
        match e {
            owl_core::Error::Weights(w) => CliError::Weights(w),
            owl_core::Error::DimensionMismatch { .. } => CliError::Dimension(e.to_string()),
            other => CliError::Core(other),
        }
    }
}
