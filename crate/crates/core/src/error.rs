//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by circuit construction, simulation and training.
#[derive(Debug, Error)]
pub enum Error {
    /// A vector had the wrong length for the circuit it was fed to.
    #[error("{what}: expected length {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// A constructor was given values that violate a documented invariant.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// An operation that needs at least one data point got none.
    #[error("empty data: {0}")]
    EmptyData(&'static str),

    /// A simulation would exceed the configured memory budget.
    #[error("{what} requires {required} amplitudes, budget is {budget}")]
    ResourceBudget {
        what: &'static str,
        required: usize,
        budget: usize,
    },

    /// The suppression polynomial fit failed to reach usable quality
    /// (typically the softness w is too small for the degree d).
    #[error(
        "suppressor fit infeasible: below-threshold residual {deep_residual:.3e} \
         exceeds tolerance {tolerance:.3e} (max residual {max_residual:.3e})"
    )]
    FitQuality {
        deep_residual: f64,
        max_residual: f64,
        tolerance: f64,
    },

    /// A formula was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// A CSV row failed to parse as `D` floats plus an integer label.
    #[error("csv parse error at line {line}: {message}")]
    CsvParse { line: usize, message: String },

    /// A CSV row parsed but violates the dataset schema.
    #[error("csv schema error at line {line}: {message}")]
    CsvSchema { line: usize, message: String },

    /// The CSV file contains no data rows.
    #[error("empty dataset: {0}")]
    EmptyDataset(String),
}

pub type Result<T> = std::result::Result<T, Error>;
