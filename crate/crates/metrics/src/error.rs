use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("line {line}: unterminated string literal")]
    UnterminatedString { line: u32 },
    #[error("line {line}: unterminated character literal")]
    UnterminatedChar { line: u32 },
    #[error("line {line}: unterminated block comment")]
    UnterminatedComment { line: u32 },
}

impl LexError {
    pub fn line(&self) -> u32 {
        match self {
            LexError::UnterminatedString { line }
            | LexError::UnterminatedChar { line }
            | LexError::UnterminatedComment { line } => *line,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0} is not a directory")]
    NotADirectory(PathBuf),
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("class `{0}` not found in the project model")]
    UnknownClass(String),
    #[error("metrics table: {0}")]
    Table(String),
    #[error("line {line}: {message}")]
    TableRow { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
