//! Command-line front end: argument parsing, the pipeline stages as
//! functions, and atomic artifact output.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;
pub mod stages;

pub use commands::{run, Outcome, ERROR_EXIT};
pub use error::{CliError, Result};
