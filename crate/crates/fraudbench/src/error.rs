//! Error type shared across the toolkit.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// CSV header does not match the expected dataset schema.
    #[error("schema error: {0}")]
    Schema(String),

    /// A data cell failed to parse; `row` is the 1-based data row index.
    #[error("parse error at data row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("dataset has a header but no data rows")]
    EmptyDataset,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A random partition left one side without fraud records.
    #[error("degenerate partition: {0}")]
    DegeneratePartition(String),

    /// An undersampling ratio asks for more records than the pool holds.
    #[error("infeasible fraud ratio: {0}")]
    InfeasibleRatio(String),

    /// A SMOTE sample spec cannot be met by the pool.
    #[error("infeasible sample spec: {0}")]
    InfeasibleSpec(String),

    #[error("training error: {0}")]
    Training(String),

    #[error("input error: {0}")]
    Input(String),

    /// The ensemble weight ceiling cannot hold for this member count.
    #[error("infeasible weight ceiling: {0}")]
    InfeasibleCeiling(String),

    /// A train/validation split left one side without both classes.
    #[error("degenerate split: {0}")]
    DegenerateSplit(String),

    #[error("config error: {0}")]
    Config(String),

    /// A Monte Carlo iteration stayed degenerate through every retry.
    #[error("harness aborted: {0}")]
    Aborted(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether a fresh seed could plausibly clear the failure. Degenerate
    /// draws (a pool or split missing a class, a ratio the current pool
    /// cannot meet) are retryable; structural errors are not.
    pub fn is_retryable(&self) -> bool {
        matches!(
            self,
            Error::DegeneratePartition(_)
                | Error::InfeasibleRatio(_)
                | Error::InfeasibleSpec(_)
                | Error::Training(_)
                | Error::DegenerateSplit(_)
        )
    }
}
