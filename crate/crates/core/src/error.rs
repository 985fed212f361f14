use std::path::PathBuf;

use thiserror::Error;

use crate::types::DocCategory;

pub type Result<T> = std::result::Result<T, EvalError>;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// An annotation cell lacks one of the required keys.
    #[error("annotation cell {cell} is missing field `{field}`")]
    MissingField { cell: usize, field: &'static str },

    #[error("schema mismatch in {context}: {reason}")]
    SchemaMismatch { context: String, reason: String },

    /// Box-based matching was requested but an extracted table has no box.
    #[error("extracted table {index} has no bounding box; use text-based matching")]
    MissingBox { index: usize },

    #[error("category {category} has {available} documents, {requested} requested")]
    InsufficientCategory {
        category: DocCategory,
        available: usize,
        requested: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl EvalError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        EvalError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn schema(context: impl Into<String>, reason: impl Into<String>) -> Self {
        EvalError::SchemaMismatch {
            context: context.into(),
            reason: reason.into(),
        }
    }
}
