//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("no rows in input")]
    NoRows,

    #[error("row {row}: expected {expected} columns, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {column}: cannot parse {value:?} as a number")]
    BadCell {
        row: usize,
        column: usize,
        value: String,
    },

    #[error("row {row}, column {column}: value {value} is not finite")]
    NonFinite {
        row: usize,
        column: usize,
        value: f64,
    },

    #[error("class column {name:?} not found in header")]
    ClassColumnNotFound { name: String },

    #[error("class column index {index} out of range for {columns} columns")]
    ClassColumnOutOfRange { index: usize, columns: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("attribute index {index} out of range for {attributes} attributes")]
    AttributeOutOfRange { index: usize, attributes: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{context}: {source}")]
    Serde {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("exhaustive search over {attributes} attributes exceeds the cap of {cap}")]
    ExhaustiveCapExceeded { attributes: usize, cap: usize },

    #[error("pipeline stage {stage:?} failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Wraps an error as a failure of a named pipeline stage.
    pub fn in_stage(stage: &'static str, source: Error) -> Self {
        Error::Stage {
            stage,
            source: Box::new(source),
        }
    }

    /// Stage name when this error is a pipeline stage failure.
    pub fn stage(&self) -> Option<&'static str> {
        match self {
            Error::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }
}
