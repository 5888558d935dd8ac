//! Feature/target join and the preprocessing pipeline: trivial-class
//! filter, LOF outlier removal, train/test split, robust scaling and
//! univariate selection, in that order.

pub mod filter;
pub mod io;
pub mod lof;
pub mod scale;
pub mod select;
pub mod split;
pub mod variant;

use std::collections::HashMap;

use coverageability_metrics::{FeatureVector, MetricSchema};
use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::labeling::{build_target_vector, CoverageRecord, LabelingConfig, TargetVector};

pub use filter::{filter_trivial_classes, trivial_kind, trivial_kind_of, TrivialKind};
pub use lof::{lof_outlier_removal, lof_scores, LofOutcome};
pub use scale::{robust_scale, RobustScalerStats};
pub use select::{f_statistics, select_k_best};
pub use split::split_indices;
pub use variant::Variant;

pub const TARGET_COLUMNS: [&str; 4] = ["target_statement", "target_branch", "target_mean", "target_coverageability"];

/// One labelled class over the full schema.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledRow {
    pub class: String,
    pub values: Vec<f64>,
    pub target: TargetVector,
}

/// Rows of one side of the split.
#[derive(Debug, Clone, PartialEq)]
pub struct Rows {
    pub classes: Vec<String>,
    /// Unscaled feature values.
    pub x: Array2<f64>,
    pub y: Vec<TargetVector>,
}

impl Rows {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn coverageability(&self) -> Vec<f64> {
        self.y.iter().map(|t| t.coverageability).collect()
    }

    fn from_labeled(rows: &[&LabeledRow], columns: &[usize]) -> Rows {
        let mut x = Array2::zeros((rows.len(), columns.len()));
        for (i, r) in rows.iter().enumerate() {
            for (j, &c) in columns.iter().enumerate() {
                x[[i, j]] = r.values[c];
            }
        }
        Rows {
            classes: rows.iter().map(|r| r.class.clone()).collect(),
            x,
            y: rows.iter().map(|r| r.target).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineSettings {
    pub variant: Variant,
    pub seed: u64,
    pub train_fraction: f64,
    pub lof_k: usize,
    pub lof_threshold: f64,
    /// Selection width for DS2.
    pub select_k: usize,
}

impl PipelineSettings {
    pub fn new(variant: Variant, seed: u64) -> Self {
        PipelineSettings {
            variant,
            seed,
            train_fraction: 0.75,
            lof_k: 20,
            lof_threshold: 1.5,
            select_k: variant::DS2_WIDTH,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FilterLog {
    /// Classes with metrics but no coverage record.
    pub unlabeled: Vec<String>,
    /// Coverage records naming classes absent from the metrics.
    pub unmatched_coverage: Vec<String>,
    pub simple: Vec<String>,
    pub data: Vec<String>,
    pub outliers: Vec<String>,
    pub lof_skipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub schema_version: String,
    pub settings: PipelineSettings,
    pub filter_log: FilterLog,
    pub train_rows: usize,
    pub test_rows: usize,
    /// Scaler fitted on the training rows, aligned with the dataset columns.
    pub scaler: RobustScalerStats,
    /// Selected feature names (the dataset columns).
    pub mask: Vec<String>,
    /// F statistics of every DS1 column, for DS2 only.
    pub f_statistics: Option<Vec<f64>>,
}

/// A materialised variant: unscaled train and test rows plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub variant: Variant,
    pub names: Vec<String>,
    pub train: Rows,
    pub test: Rows,
    pub provenance: Provenance,
}

impl Dataset {
    pub fn scaler(&self) -> &RobustScalerStats {
        &self.provenance.scaler
    }

    pub fn scaled_train(&self) -> Array2<f64> {
        self.scaler().transform(self.train.x.view())
    }

    pub fn scaled_test(&self) -> Array2<f64> {
        self.scaler().transform(self.test.x.view())
    }
}

/// Joins feature vectors with coverage records by class name and labels
/// them. Rows follow the feature-vector order.
pub fn join(features: &[FeatureVector], records: &[CoverageRecord], config: &LabelingConfig) -> (Vec<LabeledRow>, FilterLog) {
    let by_class: HashMap<&str, &CoverageRecord> = records.iter().map(|r| (r.class.as_str(), r)).collect();
    let mut log = FilterLog::default();
    let mut rows = Vec::new();
    for fv in features {
        match by_class.get(fv.class.as_str()) {
            Some(rec) => rows.push(LabeledRow {
                class: fv.class.clone(),
                values: fv.values.clone(),
                target: build_target_vector(rec, config),
            }),
            None => log.unlabeled.push(fv.class.clone()),
        }
    }
    let known: std::collections::HashSet<&str> = features.iter().map(|f| f.class.as_str()).collect();
    log.unmatched_coverage = records
        .iter()
        .filter(|r| !known.contains(r.class.as_str()))
        .map(|r| r.class.clone())
        .collect();
    (rows, log)
}

/// Runs filter → outlier removal → split → scale → select on full-schema
/// rows and materialises the configured variant.
pub fn prepare(rows: Vec<LabeledRow>, mut log: FilterLog, settings: &PipelineSettings) -> Result<Dataset> {
    let schema = MetricSchema::full();
    if let Some(r) = rows.iter().find(|r| r.values.len() != schema.len()) {
        return Err(CoreError::SchemaMismatch(format!("{} has {} values, schema has {}", r.class, r.values.len(), schema.len())));
    }
    let (rows, removed) = filter_trivial_classes(rows, |r| r.values.as_slice());
    for (row, kind) in removed {
        match kind {
            TrivialKind::Simple => log.simple.push(row.class),
            TrivialKind::Data => log.data.push(row.class),
        }
    }

    let all = full_matrix(&rows);
    let outcome = lof_outlier_removal(all.view(), settings.lof_k, settings.lof_threshold);
    log.lof_skipped = outcome.scores.is_none();
    log.outliers = outcome.removed.iter().map(|&i| rows[i].class.clone()).collect();
    let rows: Vec<&LabeledRow> = outcome.kept.iter().map(|&i| &rows[i]).collect();
    if rows.len() < 2 {
        return Err(CoreError::Empty("fewer than two rows survive preprocessing"));
    }

    let (train_idx, test_idx) = split_indices(rows.len(), settings.train_fraction, settings.seed);
    if train_idx.is_empty() || test_idx.is_empty() {
        return Err(CoreError::Empty("train or test side of the split"));
    }
    let pick = |idx: &[usize]| idx.iter().map(|&i| rows[i]).collect::<Vec<_>>();
    let (train_rows, test_rows) = (pick(&train_idx), pick(&test_idx));

    let mut columns = settings.variant.columns();
    let train = Rows::from_labeled(&train_rows, &columns);
    let mut scaler = RobustScalerStats::fit(train.x.view());
    let mut f_stats = None;
    let mut keep: Vec<usize> = (0..columns.len()).collect();
    if settings.variant == Variant::DS2 {
        let scaled = scaler.transform(train.x.view());
        let target = train.coverageability();
        f_stats = Some(f_statistics(scaled.view(), &target));
        keep = select_k_best(scaled.view(), &target, settings.select_k.min(columns.len()));
        columns = keep.iter().map(|&j| columns[j]).collect();
        scaler = scaler.restrict(&keep);
    }
    let train = Rows::from_labeled(&train_rows, &columns);
    let test = Rows::from_labeled(&test_rows, &columns);
    let names: Vec<String> = columns.iter().map(|&c| schema.features[c].name.clone()).collect();
    debug_assert_eq!(keep.len(), names.len());
    Ok(Dataset {
        variant: settings.variant,
        provenance: Provenance {
            schema_version: schema.version.to_string(),
            settings: settings.clone(),
            filter_log: log,
            train_rows: train.len(),
            test_rows: test.len(),
            scaler,
            mask: names.clone(),
            f_statistics: f_stats,
        },
        names,
        train,
        test,
    })
}

fn full_matrix(rows: &[LabeledRow]) -> Array2<f64> {
    let data: Vec<f64> = rows.iter().flat_map(|r| r.values.iter().copied()).collect();
    Array2::from_shape_vec((rows.len(), MetricSchema::full().len()), data).expect("row width checked")
}
