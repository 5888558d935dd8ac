//! Local Outlier Factor over Euclidean distance.
//!
//! Exactly `k` neighbours per point (ties broken by row index). Local
//! reachability density is `1 / (mean reachability + 1e-10)` so that
//! duplicate points get a finite density and an LOF of exactly 1.

use ndarray::ArrayView2;
use rayon::prelude::*;

const DENSITY_EPS: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LofOutcome {
    /// Retained row indices, ascending.
    pub kept: Vec<usize>,
    /// Removed row indices, ascending.
    pub removed: Vec<usize>,
    /// Per-row LOF, or `None` when too few rows to run.
    pub scores: Option<Vec<f64>>,
}

fn distance(a: ndarray::ArrayView1<f64>, b: ndarray::ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// LOF score of every row. Requires `k < rows`.
pub fn lof_scores(points: ArrayView2<f64>, k: usize) -> Vec<f64> {
    let n = points.nrows();
    assert!(k >= 1 && k < n, "LOF needs 1 <= k < n");
    let neighbours: Vec<Vec<(f64, usize)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut d: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (distance(points.row(i), points.row(j)), j))
                .collect();
            d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            d.truncate(k);
            d
        })
        .collect();
    let k_distance: Vec<f64> = neighbours.iter().map(|nb| nb[k - 1].0).collect();
    let lrd: Vec<f64> = neighbours
        .iter()
        .map(|nb| {
            let reach: f64 = nb.iter().map(|&(d, j)| d.max(k_distance[j])).sum::<f64>() / k as f64;
            1.0 / (reach + DENSITY_EPS)
        })
        .collect();
    neighbours
        .iter()
        .enumerate()
        .map(|(i, nb)| nb.iter().map(|&(_, j)| lrd[j]).sum::<f64>() / k as f64 / lrd[i])
        .collect()
}

/// Removes rows whose LOF exceeds `threshold`; skipped with a warning when
/// there are not more than `k` rows.
pub fn lof_outlier_removal(points: ArrayView2<f64>, k: usize, threshold: f64) -> LofOutcome {
    let n = points.nrows();
    if k == 0 || k >= n {
        log::warn!("LOF skipped: {n} rows with k = {k}");
        return LofOutcome {
            kept: (0..n).collect(),
            removed: Vec::new(),
            scores: None,
        };
    }
    let scores = lof_scores(points, k);
    let (removed, kept): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| scores[i] > threshold);
    LofOutcome {
        kept,
        removed,
        scores: Some(scores),
    }
}
