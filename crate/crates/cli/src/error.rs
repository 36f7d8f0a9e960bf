use std::path::PathBuf;

use thiserror::Error;

use crate::config::ConfigErrors;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigErrors),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("`{0}` is neither a readable file nor a bundled preset (see `list-presets`)")]
    UnknownConfig(String),
}
