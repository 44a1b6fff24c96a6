use thiserror::Error;

use crate::series::SubsequenceResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("index {index} is outside the schedule range 1..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("schedule yields only {found} strictly decreasing envelope breaks, {wanted} requested")]
    NoBreaks { found: usize, wanted: usize },

    #[error("kernel `{kernel}` is singular at t = {t}")]
    Singularity { kernel: &'static str, t: f64 },

    #[error("quadrature missed tolerance {tolerance:e} (error estimate {estimate:e} after {panels} panels)")]
    Tolerance { tolerance: f64, estimate: f64, panels: usize },

    #[error("imaginary residual {residual:e} exceeds {limit:e}; output is not real")]
    NotReal { residual: f64, limit: f64 },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no index above {lower} lands within {width} of {target} (scanned up to {scanned})")]
    NotFound { lower: usize, target: f64, width: f64, scanned: usize },

    #[error("subsequence stopped after {} of {} tolerances: {cause}", partial.indices.len(), partial.mu_schedule.len())]
    Incomplete { partial: Box<SubsequenceResult>, cause: Box<Error> },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        Error::Io { path: path.display().to_string(), message: err.to_string() }
    }
}
