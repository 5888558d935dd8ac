//! A trained model with everything needed to predict from raw metrics:
//! input feature names, the training scaler, the training-range summary
//! and the learned parameters. Stored as versioned JSON; floats round-trip
//! exactly.

use std::path::Path;

use coverageability_metrics::catalog::SCHEMA_VERSION;
use coverageability_metrics::{FeatureVector, MetricSchema};
use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::dataset::RobustScalerStats;
use crate::error::{CoreError, Result};

use super::{Hyperparameters, LearnerKind, Learned};

pub const MODEL_FORMAT: &str = "coverageability-model/1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureRange {
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub format: String,
    pub kind: LearnerKind,
    pub schema_version: String,
    pub hyperparameters: Hyperparameters,
    pub seed: u64,
    /// Input columns in order (the selected-feature mask).
    pub features: Vec<String>,
    pub scaler: RobustScalerStats,
    /// Per-feature range of the raw training rows.
    pub distribution: Vec<FeatureRange>,
    pub learned: Learned,
}

impl TrainedModel {
    /// Wraps learned parameters; `train_x` holds the raw training rows.
    pub fn new(
        hyperparameters: Hyperparameters,
        seed: u64,
        features: Vec<String>,
        scaler: RobustScalerStats,
        train_x: ArrayView2<f64>,
        learned: Learned,
    ) -> Self {
        let distribution = train_x
            .columns()
            .into_iter()
            .map(|c| FeatureRange {
                min: c.iter().copied().fold(f64::INFINITY, f64::min),
                max: c.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            })
            .collect();
        TrainedModel {
            format: MODEL_FORMAT.to_string(),
            kind: hyperparameters.kind(),
            schema_version: SCHEMA_VERSION.to_string(),
            hyperparameters,
            seed,
            features,
            scaler,
            distribution,
            learned,
        }
    }

    fn check_width(&self, width: usize) -> Result<()> {
        if width != self.features.len() {
            return Err(CoreError::SchemaMismatch(format!(
                "model expects {} features, got {width}",
                self.features.len()
            )));
        }
        Ok(())
    }

    /// Prediction from one raw row in [`Self::features`] order.
    pub fn predict_raw_row(&self, row: &[f64]) -> Result<f64> {
        self.check_width(row.len())?;
        Ok(self.learned.predict_row(&self.scaler.transform_row(row)))
    }

    /// Predictions from raw rows.
    pub fn predict_raw(&self, x: ArrayView2<f64>) -> Result<Vec<f64>> {
        self.check_width(x.ncols())?;
        Ok(self.learned.predict(self.scaler.transform(x).view()))
    }

    /// Picks this model's inputs out of a full-schema vector.
    pub fn select_inputs(&self, fv: &FeatureVector) -> Result<Vec<f64>> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CoreError::SchemaMismatch(format!(
                "model built for {}, extractor provides {SCHEMA_VERSION}",
                self.schema_version
            )));
        }
        let schema = MetricSchema::full();
        if fv.values.len() != schema.len() {
            return Err(CoreError::SchemaMismatch(format!("feature vector has {} values", fv.values.len())));
        }
        self.features
            .iter()
            .map(|name| {
                schema
                    .position(name)
                    .map(|i| fv.values[i])
                    .ok_or_else(|| CoreError::SchemaMismatch(format!("unknown feature `{name}`")))
            })
            .collect()
    }

    pub fn predict_features(&self, fv: &FeatureVector) -> Result<f64> {
        self.predict_raw_row(&self.select_inputs(fv)?)
    }

    /// Inputs outside the training range, as `(feature, value)`.
    pub fn out_of_distribution(&self, row: &[f64]) -> Vec<(String, f64)> {
        self.features
            .iter()
            .zip(&self.distribution)
            .zip(row)
            .filter(|((_, r), v)| **v < r.min || **v > r.max)
            .map(|((n, _), v)| (n.clone(), *v))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CoreError::Format(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: TrainedModel = serde_json::from_str(text).map_err(|e| CoreError::Format(format!("model: {e}")))?;
        if m.format != MODEL_FORMAT {
            return Err(CoreError::Format(format!("unsupported model format `{}`", m.format)));
        }
        if m.scaler.width() != m.features.len() || m.distribution.len() != m.features.len() {
            return Err(CoreError::Format("model columns disagree".into()));
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CoreError::io(path, e))?;
        Self::from_json(&text)
    }
}
