//! Permutation importance: the drop in test R² when one column is shuffled.

use std::io::Write;

use ndarray::ArrayView2;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::learners::{Learned, TrainedModel};
use crate::rng::{stream_id, stream_rng};
use crate::selection::evaluate;

pub const DEFAULT_REPEATS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureImportance {
    pub feature: String,
    /// 1 is the most important.
    pub rank: usize,
    pub mean_drop: f64,
    /// One drop per repeat; never clipped, so noise features may go negative.
    pub drops: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceReport {
    pub seed: u64,
    pub repeats: usize,
    pub baseline_r2: f64,
    /// Sorted by rank.
    pub features: Vec<FeatureImportance>,
}

impl ImportanceReport {
    pub fn top(&self, k: usize) -> &[FeatureImportance] {
        &self.features[..k.min(self.features.len())]
    }
}

/// R² after replacing column `j` of scaled rows with `column[perm[i]]`.
pub fn permuted_r2(learned: &Learned, x: ArrayView2<f64>, y: &[f64], j: usize, perm: &[usize]) -> Result<f64> {
    let mut buf = vec![0.0; x.ncols()];
    let pred: Vec<f64> = (0..x.nrows())
        .map(|i| {
            buf.iter_mut().zip(x.row(i)).for_each(|(b, v)| *b = *v);
            buf[j] = x[[perm[i], j]];
            learned.predict_row(&buf)
        })
        .collect();
    Ok(evaluate(y, &pred)?.r2)
}

/// Importance of every model input on raw rows `x` in the model's feature order.
pub fn permutation_importance(
    model: &TrainedModel,
    x: ArrayView2<f64>,
    y: &[f64],
    repeats: usize,
    seed: u64,
) -> Result<ImportanceReport> {
    if x.ncols() != model.features.len() {
        return Err(CoreError::SchemaMismatch(format!(
            "model expects {} features, test rows have {}",
            model.features.len(),
            x.ncols()
        )));
    }
    if repeats == 0 {
        return Err(CoreError::InvalidArgument("repeats must be positive".into()));
    }
    let scaled = model.scaler.transform(x);
    let baseline_r2 = evaluate(y, &model.learned.predict(scaled.view()))?.r2;
    let d = x.ncols();
    let drops: Vec<f64> = (0..d * repeats)
        .into_par_iter()
        .map(|k| {
            let (j, r) = (k / repeats, k % repeats);
            let mut perm: Vec<usize> = (0..x.nrows()).collect();
            perm.shuffle(&mut stream_rng(seed, stream_id(j as u64, r as u64)));
            permuted_r2(&model.learned, scaled.view(), y, j, &perm).map(|v| baseline_r2 - v)
        })
        .collect::<Result<_>>()?;
    let mut features: Vec<FeatureImportance> = model
        .features
        .iter()
        .zip(drops.chunks(repeats))
        .map(|(name, d)| FeatureImportance {
            feature: name.clone(),
            rank: 0,
            mean_drop: d.iter().sum::<f64>() / repeats as f64,
            drops: d.to_vec(),
        })
        .collect();
    // stable: ties keep input order
    features.sort_by(|a, b| b.mean_drop.total_cmp(&a.mean_drop));
    for (i, f) in features.iter_mut().enumerate() {
        f.rank = i + 1;
    }
    Ok(ImportanceReport {
        seed,
        repeats,
        baseline_r2,
        features,
    })
}

/// rank, feature, mean drop, then one column per repeat.
pub fn write_importance<W: Write>(report: &ImportanceReport, out: W) -> Result<()> {
    let fail = |e: csv::Error| CoreError::Format(e.to_string());
    let mut w = crate::csv_writer(out);
    let mut header = vec!["rank".to_string(), "feature".into(), "mean_drop".into()];
    header.extend((1..=report.repeats).map(|r| format!("drop_{r}")));
    w.write_record(&header).map_err(fail)?;
    for f in &report.features {
        let mut rec = vec![f.rank.to_string(), f.feature.clone(), f.mean_drop.to_string()];
        rec.extend(f.drops.iter().map(f64::to_string));
        w.write_record(&rec).map_err(fail)?;
    }
    w.flush().map_err(|e| CoreError::Format(e.to_string()))
}
