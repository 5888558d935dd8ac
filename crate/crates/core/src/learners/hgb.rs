//! Histogram gradient boosting.
//!
//! Each feature is binned into at most 255 bins: midpoints between distinct
//! values when there are few enough of them, interpolated quantiles
//! otherwise. Trees grow best-first on the binned gradients (at most 31
//! leaves, depth and leaf-size limits per hyperparameters) and are stored
//! with real-valued thresholds, so prediction needs no binning. The model
//! is `baseline + Σ learning_rate · tree_k(x)`, accumulated stage by stage.

use std::cmp::Ordering;

use ndarray::{Array2, ArrayView2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::scale::quantile_sorted;
use crate::error::{CoreError, Result};

use super::tree::{median, Node, Tree};

pub const MAX_BINS: usize = 255;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoostLoss {
    LeastSquares,
    LeastAbsoluteDeviation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HgbrParams {
    pub loss: BoostLoss,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub max_iter: usize,
    pub learning_rate: f64,
    pub max_leaf_nodes: usize,
    pub max_bins: usize,
}

impl Default for HgbrParams {
    fn default() -> Self {
        HgbrParams {
            loss: BoostLoss::LeastSquares,
            max_depth: Some(10),
            min_samples_leaf: 20,
            max_iter: 100,
            learning_rate: 0.1,
            max_leaf_nodes: 31,
            max_bins: MAX_BINS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostedModel {
    pub baseline: f64,
    pub learning_rate: f64,
    pub trees: Vec<Tree>,
    /// Per-feature bin upper edges used during training.
    pub bin_edges: Vec<Vec<f64>>,
}

impl BoostedModel {
    /// Predictions after 0, 1, …, k stages.
    pub fn staged_predict_row(&self, row: &[f64]) -> Vec<f64> {
        let mut acc = self.baseline;
        let mut out = Vec::with_capacity(self.trees.len() + 1);
        out.push(acc);
        for t in &self.trees {
            acc += self.learning_rate * t.predict_row(row);
            out.push(acc);
        }
        out
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut acc = self.baseline;
        for t in &self.trees {
            acc += self.learning_rate * t.predict_row(row);
        }
        acc
    }
}

/// Upper bin edges of one feature: value `v` falls in the first bin whose
/// edge is `≥ v`, or in the last bin.
pub fn bin_edges(values: &[f64], max_bins: usize) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut distinct = sorted.clone();
    distinct.dedup();
    if distinct.len() <= max_bins {
        return distinct.windows(2).map(|w| w[0] + (w[1] - w[0]) / 2.0).collect();
    }
    let mut edges: Vec<f64> = (1..max_bins)
        .map(|i| quantile_sorted(&sorted, i as f64 / max_bins as f64))
        .collect();
    edges.dedup();
    edges
}

pub fn bin_of(edges: &[f64], v: f64) -> u8 {
    edges.partition_point(|&e| e < v) as u8
}

struct Binned {
    /// Column-major bin codes.
    codes: Vec<Vec<u8>>,
    edges: Vec<Vec<f64>>,
}

fn bin_matrix(x: ArrayView2<f64>, max_bins: usize) -> Binned {
    let cols: Vec<(Vec<f64>, Vec<u8>)> = (0..x.ncols())
        .into_par_iter()
        .map(|j| {
            let v = x.column(j).to_vec();
            let edges = bin_edges(&v, max_bins);
            let codes = v.iter().map(|&x| bin_of(&edges, x)).collect();
            (edges, codes)
        })
        .collect();
    let (edges, codes) = cols.into_iter().unzip();
    Binned { codes, edges }
}

#[derive(Debug, Clone, Copy, Default)]
struct Bucket {
    g: f64,
    count: usize,
}

struct SplitInfo {
    gain: f64,
    feature: usize,
    bin: usize,
}

struct GrowingLeaf {
    slot: usize,
    rows: Vec<usize>,
    depth: usize,
    split: Option<SplitInfo>,
}

fn score(g: f64, h: f64) -> f64 {
    g * g / h
}

fn find_split(b: &Binned, grad: &[f64], rows: &[usize], hp: &HgbrParams) -> Option<SplitInfo> {
    let g_total: f64 = rows.iter().map(|&i| grad[i]).sum();
    let n = rows.len();
    let parent = score(g_total, n as f64);
    let per_feature: Vec<Option<SplitInfo>> = (0..b.codes.len())
        .into_par_iter()
        .map(|f| {
            let bins = b.edges[f].len() + 1;
            if bins < 2 {
                return None;
            }
            let mut hist = vec![Bucket::default(); bins];
            let codes = &b.codes[f];
            for &i in rows {
                let h = &mut hist[codes[i] as usize];
                h.g += grad[i];
                h.count += 1;
            }
            let mut best: Option<SplitInfo> = None;
            let (mut gl, mut nl) = (0.0, 0usize);
            for (bin, bucket) in hist.iter().enumerate().take(bins - 1) {
                gl += bucket.g;
                nl += bucket.count;
                let nr = n - nl;
                if nl < hp.min_samples_leaf || nr < hp.min_samples_leaf {
                    continue;
                }
                let gain = score(gl, nl as f64) + score(g_total - gl, nr as f64) - parent;
                if gain > 1e-12 && best.as_ref().is_none_or(|s| gain > s.gain) {
                    best = Some(SplitInfo { gain, feature: f, bin });
                }
            }
            best
        })
        .collect();
    per_feature.into_iter().flatten().fold(None, |acc: Option<SplitInfo>, s| match acc {
        Some(a) if a.gain >= s.gain => Some(a),
        _ => Some(s),
    })
}

fn grow_tree(b: &Binned, grad: &[f64], residual_for_leaf: &dyn Fn(&[usize]) -> f64, hp: &HgbrParams, n: usize) -> Tree {
    let mut nodes = vec![Node::Leaf { value: 0.0 }];
    let rows: Vec<usize> = (0..n).collect();
    let can_split = |depth: usize, rows: &[usize]| hp.max_depth.is_none_or(|m| depth < m) && rows.len() >= 2 * hp.min_samples_leaf;
    let mut open: Vec<GrowingLeaf> = Vec::new();
    let root_split = if can_split(0, &rows) { find_split(b, grad, &rows, hp) } else { None };
    open.push(GrowingLeaf {
        slot: 0,
        rows,
        depth: 0,
        split: root_split,
    });
    let mut done: Vec<GrowingLeaf> = Vec::new();
    let mut leaves = 1;
    while leaves < hp.max_leaf_nodes {
        // best-first: largest gain, earliest slot on ties
        let pick = open
            .iter()
            .enumerate()
            .filter(|(_, l)| l.split.is_some())
            .max_by(|(_, a), (_, b)| {
                let (ga, gb) = (a.split.as_ref().unwrap().gain, b.split.as_ref().unwrap().gain);
                ga.partial_cmp(&gb).unwrap_or(Ordering::Equal).then(b.slot.cmp(&a.slot))
            })
            .map(|(i, _)| i);
        let Some(i) = pick else { break };
        let leaf = open.swap_remove(i);
        let s = leaf.split.expect("picked splittable leaf");
        let codes = &b.codes[s.feature];
        let (left, right): (Vec<usize>, Vec<usize>) = leaf.rows.iter().partition(|&&r| codes[r] as usize <= s.bin);
        let (l, r) = (nodes.len(), nodes.len() + 1);
        nodes.push(Node::Leaf { value: 0.0 });
        nodes.push(Node::Leaf { value: 0.0 });
        nodes[leaf.slot] = Node::Split {
            feature: s.feature,
            threshold: b.edges[s.feature][s.bin],
            left: l,
            right: r,
        };
        leaves += 1;
        for (slot, rows) in [(l, left), (r, right)] {
            let depth = leaf.depth + 1;
            let split = if can_split(depth, &rows) { find_split(b, grad, &rows, hp) } else { None };
            open.push(GrowingLeaf { slot, rows, depth, split });
        }
    }
    done.extend(open);
    for leaf in done {
        nodes[leaf.slot] = Node::Leaf {
            value: residual_for_leaf(&leaf.rows),
        };
    }
    Tree { nodes }
}

pub fn train_hgbr(x: ArrayView2<f64>, y: &[f64], hp: &HgbrParams, _seed: u64) -> Result<BoostedModel> {
    let n = x.nrows();
    if n == 0 || n != y.len() {
        return Err(CoreError::LengthMismatch { left: n, right: y.len() });
    }
    if hp.max_leaf_nodes < 2 || hp.min_samples_leaf == 0 || hp.max_bins < 2 || hp.max_bins > MAX_BINS || hp.learning_rate <= 0.0 {
        return Err(CoreError::InvalidHyperparameters(format!("{hp:?}")));
    }
    let binned = bin_matrix(x, hp.max_bins);
    let baseline = match hp.loss {
        BoostLoss::LeastSquares => y.iter().sum::<f64>() / n as f64,
        BoostLoss::LeastAbsoluteDeviation => median(&mut y.to_vec()),
    };
    let mut raw = vec![baseline; n];
    let mut trees = Vec::with_capacity(hp.max_iter);
    for _ in 0..hp.max_iter {
        let grad: Vec<f64> = match hp.loss {
            BoostLoss::LeastSquares => raw.iter().zip(y).map(|(p, t)| p - t).collect(),
            BoostLoss::LeastAbsoluteDeviation => raw.iter().zip(y).map(|(p, t)| (p - t).signum() * f64::from(p != t)).collect(),
        };
        let leaf_value = |rows: &[usize]| -> f64 {
            match hp.loss {
                BoostLoss::LeastSquares => -rows.iter().map(|&i| grad[i]).sum::<f64>() / rows.len() as f64,
                BoostLoss::LeastAbsoluteDeviation => median(&mut rows.iter().map(|&i| y[i] - raw[i]).collect::<Vec<_>>()),
            }
        };
        let tree = grow_tree(&binned, &grad, &leaf_value, hp, n);
        for (i, p) in raw.iter_mut().enumerate() {
            *p += hp.learning_rate * tree.predict_row(&x.row(i).to_vec());
        }
        trees.push(tree);
    }
    Ok(BoostedModel {
        baseline,
        learning_rate: hp.learning_rate,
        trees,
        bin_edges: binned.edges,
    })
}

/// Binned copy of `x` under a model's edges, for inspection.
pub fn bin_with(edges: &[Vec<f64>], x: ArrayView2<f64>) -> Array2<u8> {
    Array2::from_shape_fn(x.dim(), |(i, j)| bin_of(&edges[j], x[[i, j]]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use ndarray::Array2;
    use rand::Rng;

    #[test]
    fn small_cardinality_binning() {
        let edges = bin_edges(&[3.0, 1.0, 2.0, 1.0, 3.0], 255);
        assert_eq!(edges, vec![1.5, 2.5]);
        assert_eq!([1.0, 2.0, 3.0].map(|v| bin_of(&edges, v)), [0, 1, 2]);
        let many: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        let e = bin_edges(&many, 255);
        assert_eq!(e.len(), 254);
        let codes: std::collections::BTreeSet<u8> = many.iter().map(|&v| bin_of(&e, v)).collect();
        assert_eq!(codes.len(), 255);
    }

    fn step_data() -> (Array2<f64>, Vec<f64>) {
        let x = Array2::from_shape_fn((200, 1), |(i, _)| i as f64 / 200.0);
        let y = x.column(0).iter().map(|&v| if v < 0.3 { 0.0 } else if v < 0.7 { 1.0 } else { 0.5 }).collect();
        (x, y)
    }

    #[test]
    fn fits_a_step_function() {
        let (x, y) = step_data();
        let hp = HgbrParams {
            max_iter: 100,
            min_samples_leaf: 5,
            ..HgbrParams::default()
        };
        let m = train_hgbr(x.view(), &y, &hp, 0).unwrap();
        // oracle: replay the residual recursion directly on the training rows
        let mut pred = vec![y.iter().sum::<f64>() / 200.0; 200];
        for t in &m.trees {
            for i in 0..200 {
                pred[i] += 0.1 * t.predict_row(&[x[[i, 0]]]);
            }
        }
        let rmse = (pred.iter().zip(&y).map(|(p, t)| (p - t).powi(2)).sum::<f64>() / 200.0).sqrt();
        assert!(rmse < 0.05, "{rmse}");
        for i in 0..200 {
            assert_eq!(m.predict_row(&[x[[i, 0]]]), pred[i]);
        }
    }

    #[test]
    fn first_stage_fits_residuals_of_the_mean() {
        let (x, y) = step_data();
        let hp = HgbrParams {
            max_iter: 1,
            ..HgbrParams::default()
        };
        let m = train_hgbr(x.view(), &y, &hp, 0).unwrap();
        let mean = y.iter().sum::<f64>() / 200.0;
        assert_eq!(m.baseline, mean);
        // each leaf holds the mean residual y − mean of its rows
        let t = &m.trees[0];
        let mut groups: std::collections::BTreeMap<u64, Vec<f64>> = Default::default();
        for i in 0..200 {
            groups.entry(t.predict_row(&[x[[i, 0]]]).to_bits()).or_default().push(y[i] - mean);
        }
        for (leaf, res) in groups {
            let avg = res.iter().sum::<f64>() / res.len() as f64;
            assert!((f64::from_bits(leaf) - avg).abs() < 1e-12);
        }
        for i in 0..200 {
            let row = [x[[i, 0]]];
            assert_eq!(m.predict_row(&row), mean + 0.1 * t.predict_row(&row));
        }
    }

    #[test]
    fn staged_predictions_telescope() {
        let mut rng = stream_rng(3, 0);
        let x = Array2::<f64>::from_shape_fn((150, 3), |_| rng.gen_range(-1.0..1.0));
        let y: Vec<f64> = x.rows().into_iter().map(|r| r[0] * r[1] + r[2].abs()).collect();
        for loss in [BoostLoss::LeastSquares, BoostLoss::LeastAbsoluteDeviation] {
            let hp = HgbrParams {
                loss,
                max_iter: 30,
                max_depth: Some(3),
                min_samples_leaf: 5,
                ..HgbrParams::default()
            };
            let m = train_hgbr(x.view(), &y, &hp, 0).unwrap();
            for i in 0..20 {
                let row = x.row(i).to_vec();
                let staged = m.staged_predict_row(&row);
                for k in 1..staged.len() {
                    assert_eq!(staged[k], staged[k - 1] + 0.1 * m.trees[k - 1].predict_row(&row));
                }
                assert_eq!(*staged.last().unwrap(), m.predict_row(&row));
            }
            assert!(m.trees.iter().all(|t| t.depth() <= 3 && t.nodes.len() <= 61));
        }
    }

    #[test]
    fn thresholds_agree_with_bins() {
        let mut rng = stream_rng(8, 0);
        let x = Array2::<f64>::from_shape_fn((400, 2), |_| rng.gen_range(0.0..10.0));
        let y: Vec<f64> = x.rows().into_iter().map(|r| (r[0] > 4.0) as u8 as f64 + r[1] / 10.0).collect();
        let m = train_hgbr(x.view(), &y, &HgbrParams::default(), 0).unwrap();
        let codes = bin_with(&m.bin_edges, x.view());
        for t in &m.trees {
            for node in &t.nodes {
                if let Node::Split { feature, threshold, .. } = *node {
                    let bin = m.bin_edges[feature].iter().position(|&e| e == threshold).unwrap();
                    for i in 0..400 {
                        assert_eq!(x[[i, feature]] <= threshold, codes[[i, feature]] as usize <= bin);
                    }
                }
            }
        }
    }
}
