//! Which metrics drive a trained model, and in which direction they move
//! Coverageability.

pub mod impact;
pub mod importance;

pub use impact::{classify_impact, impact_table, pearson_correlation, write_impact, Impact, ImpactRecord};
pub use importance::{permutation_importance, write_importance, FeatureImportance, ImportanceReport, DEFAULT_REPEATS};
