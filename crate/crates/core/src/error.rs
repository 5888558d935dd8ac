use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("{path}: line {line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("{path}: line {line}: {message}")]
    Validation { path: String, line: usize, message: String },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("training diverged: {0}")]
    Diverged(String),
    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparameters(String),
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(&'static str),
    #[error("class `{0}` not found")]
    UnknownClass(String),
    #[error("Prediction Error: {class} predicted {value}, outside [0, 1]")]
    Prediction { class: String, value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed document: {0}")]
    Format(String),
    #[error(transparent)]
    Metrics(#[from] coverageability_metrics::MetricsError),
    #[error(transparent)]
    Model(#[from] coverageability_metrics::ModelError),
}

impl CoreError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CoreError::Io { path: path.into(), source }
    }
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
