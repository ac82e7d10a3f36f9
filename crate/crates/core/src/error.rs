use std::path::PathBuf;

use thiserror::Error;

use crate::jets::JetError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Jet(#[from] JetError),

    #[error("z = {z} lies outside the domain ({lo}, {hi})")]
    Domain { z: f64, lo: f64, hi: f64 },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("degenerate structure: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
