//! Java source model and the extended class metric catalog.
//!
//! [`model`] turns a source tree into an immutable [`model::ProjectModel`];
//! [`catalog`] computes the named feature vector of every class from it.

pub mod catalog;
pub mod error;
pub mod model;
pub mod synth;

pub use catalog::{extract_features, FeatureVector, MetricSchema, MetricsTable};
pub use error::{LexError, MetricsError, ModelError, ParseError};
pub use model::{parse_project, ProjectModel};
