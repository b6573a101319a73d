use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A row that cannot be parsed at all (wrong column count, bad number,
    /// bad timestamp). Always names the file and 1-based line.
    #[error("{file}:{line}: malformed row: {msg}")]
    MalformedRow {
        file: String,
        line: u64,
        msg: String,
    },

    /// A row that parses but violates the declared schema (unknown
    /// categorical value, out-of-range age, non-positive BMI, ...).
    #[error("{file}:{line}: schema violation: {msg}")]
    Schema {
        file: String,
        line: u64,
        msg: String,
    },

    #[error("manifest error: {0}")]
    Manifest(String),

    /// Invalid parameter combinations (k > n, M out of range, bad grid
    /// cell names, dimension mismatches).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Data-shape problems detected at runtime (empty dataset, sequence
    /// length mismatch, feature index out of range).
    #[error("data error: {0}")]
    Data(String),

    #[error("training failed: {0}")]
    Training(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
