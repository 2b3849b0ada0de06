use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed csv in {}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("ragged row {row}: expected {expected} cells, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("label column {label_column} out of range for {column_count} columns")]
    LabelColumnOutOfRange {
        label_column: usize,
        column_count: usize,
    },

    #[error("no complete instances")]
    NoCompleteInstances,

    #[error("non-numeric feature cell {value:?} at row {row}, column {column}")]
    NonNumeric {
        row: usize,
        column: usize,
        value: String,
    },

    #[error("need at least 2 distinct labels, found {0}")]
    TooFewClasses(usize),

    #[error("cannot stratify: class {class} has {size} instance(s)")]
    CannotStratify { class: usize, size: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("k = {k} exceeds training size {train}")]
    KTooLarge { k: usize, train: usize },

    #[error("empty subset")]
    EmptySubset,

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("iteration {t} exceeds maximum {max}")]
    IterationOutOfRange { t: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown dataset {0:?}")]
    UnknownDataset(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty run list")]
    EmptyRecords,

    #[error("invalid manifest {}: {message}", path.display())]
    Manifest { path: PathBuf, message: String },
}
