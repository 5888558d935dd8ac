//! The extended metric catalog: method metrics, statistical sub-metrics,
//! lexical file metrics and their assembly into a fixed named schema.

pub mod cc;
pub mod class;
pub mod lexical;
pub mod method;
pub mod package;
pub mod schema;
pub mod submetrics;
pub mod table;
pub mod vector;

pub use cc::{compute_cc, CcVariant};
pub use class::{compute_class_metrics, ClassMetrics};
pub use lexical::compute_lexical_metrics;
pub use method::{method_metrics, MethodMetrics};
pub use package::compute_package_metrics;
pub use schema::{Feature, Level, MetricSchema, SubMetricWeb, SCHEMA_VERSION};
pub use submetrics::{derive_submetrics, Filter, Op, Stats};
pub use table::MetricsTable;
pub use vector::{assemble_feature_vector, extract_features, FeatureVector};
