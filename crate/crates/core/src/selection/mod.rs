//! Cross-validated grid search and the evaluation report.

pub mod cv;
pub mod evaluate;
pub mod grid;

pub use cv::{make_cv_plan, CvPlan, Fold, FOLDS};
pub use evaluate::{evaluate, EvaluationReport};
pub use grid::{grid_search, search, train_all, write_trace, GridSpec, Search, TraceEntry};
