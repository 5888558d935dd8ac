//! Trivial-class rules shared by preprocessing and inference.

use coverageability_metrics::MetricSchema;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrivialKind {
    /// Fewer than five lines of code.
    Simple,
    /// No non-accessor methods, at least one attribute.
    Data,
}

/// Simple is checked before Data.
pub fn trivial_kind(csloc: f64, csnomnamm: f64, csnoia: f64, csnosa: f64) -> Option<TrivialKind> {
    if csloc < 5.0 {
        Some(TrivialKind::Simple)
    } else if csnomnamm == 0.0 && csnoia + csnosa > 0.0 {
        Some(TrivialKind::Data)
    } else {
        None
    }
}

/// Rule check on a full-schema vector.
pub fn trivial_kind_of(values: &[f64]) -> Option<TrivialKind> {
    let schema = MetricSchema::full();
    let get = |name: &str| values[schema.position(name).expect("base metric in schema")];
    trivial_kind(get("CSLOC"), get("CSNOMNAMM"), get("CSNOIA"), get("CSNOSA"))
}

/// Splits full-schema rows into retained rows and removed `(row, kind)`.
pub fn filter_trivial_classes<T>(rows: Vec<T>, values: impl Fn(&T) -> &[f64]) -> (Vec<T>, Vec<(T, TrivialKind)>) {
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for row in rows {
        match trivial_kind_of(values(&row)) {
            Some(kind) => removed.push((row, kind)),
            None => kept.push(row),
        }
    }
    (kept, removed)
}
