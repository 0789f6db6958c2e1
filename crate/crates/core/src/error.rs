use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed config: {0}")]
    Config(String),
    #[error("unknown attribute column {0:?}")]
    UnknownColumn(String),
    #[error("zero complete cycles after filtering")]
    ZeroCycles,
    #[error("non-constant row count per declared period label: {0}")]
    IrregularCycle(String),
    #[error("missing or non-numeric value in row {row}, column {column:?}")]
    MissingValue { row: usize, column: String },
    #[error("invalid database: {0}")]
    InvalidDatabase(String),
    #[error("invalid synthetic spec: {0}")]
    InvalidSynthetic(String),
    #[error("threshold out of range: {0}")]
    Threshold(String),
    #[error("empty itemset")]
    EmptyItemset,
    #[error("gradual item {0} is not present in the run database")]
    MissingItem(String),
    #[error("invalid period label {0:?}")]
    InvalidLabel(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
