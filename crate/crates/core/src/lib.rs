//! Coverage labeling, dataset preparation, regression learners, model
//! selection, model inspection and the prediction procedure for class
//! coverageability.

pub mod dataset;
pub mod error;
pub mod inference;
pub mod inspection;
pub mod labeling;
pub mod learners;
pub mod report;
pub mod rng;
pub mod selection;
pub mod synthetic;

pub use error::{CoreError, Result};

/// Comma-delimited writer with LF line endings.
pub(crate) fn csv_writer<W: std::io::Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}
