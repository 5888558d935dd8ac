//! Assembly of full feature vectors: package slice, file slice, class slice.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::ProjectModel;

use super::class::{compute_class_metrics, ClassMetrics};
use super::lexical::compute_lexical_metrics;
use super::package::compute_package_metrics;
use super::schema::{Level, MetricSchema};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    /// Qualified class name.
    pub class: String,
    /// Values aligned with [`MetricSchema::full`].
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn slice(&self, level: Level) -> &[f64] {
        &self.values[MetricSchema::full().partition(level)]
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        MetricSchema::full().position(name).map(|i| self.values[i])
    }
}

/// Feature vectors for every class of the model, sorted by qualified name.
///
/// Work is spread over threads; the result does not depend on scheduling.
pub fn extract_features(model: &ProjectModel) -> Vec<FeatureVector> {
    let classes: Vec<ClassMetrics> = (0..model.classes().len())
        .into_par_iter()
        .map(|id| compute_class_metrics(model, id))
        .collect();
    let lexical: Vec<[f64; 17]> = model
        .files()
        .par_iter()
        .map(|f| compute_lexical_metrics(&f.tokens))
        .collect();
    let packages: Vec<Vec<f64>> = (0..model.packages().len())
        .into_par_iter()
        .map(|p| {
            let members: Vec<&ClassMetrics> = model.packages()[p].classes.iter().map(|&c| &classes[c]).collect();
            compute_package_metrics(model, p, &members)
        })
        .collect();

    let mut out: Vec<FeatureVector> = classes
        .iter()
        .map(|cm| {
            let c = model.class(cm.class);
            let mut values = Vec::with_capacity(MetricSchema::full().len());
            values.extend_from_slice(&packages[c.package]);
            values.extend_from_slice(&lexical[c.file]);
            values.extend_from_slice(&cm.values);
            FeatureVector {
                class: c.qualified_name.clone(),
                values,
            }
        })
        .collect();
    out.sort_by(|a, b| a.class.cmp(&b.class));
    out
}

/// Feature vector of a single class.
pub fn assemble_feature_vector(model: &ProjectModel, class: usize) -> FeatureVector {
    let c = model.class(class);
    let pkg = &model.packages()[c.package];
    let members: HashMap<usize, ClassMetrics> = pkg.classes.iter().map(|&id| (id, compute_class_metrics(model, id))).collect();
    let refs: Vec<&ClassMetrics> = pkg.classes.iter().map(|id| &members[id]).collect();
    let mut values = compute_package_metrics(model, c.package, &refs);
    values.extend_from_slice(&compute_lexical_metrics(&model.file_of(class).tokens));
    values.extend_from_slice(&members[&class].values);
    FeatureVector {
        class: c.qualified_name.clone(),
        values,
    }
}
