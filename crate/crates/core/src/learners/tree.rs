//! Regression trees: node storage shared by both tree learners, and the
//! greedy exact-split builder used by the random forest.
//!
//! Thresholds are midpoints between consecutive distinct values; a sample
//! goes left when `x ≤ threshold`. Squared-error splits minimise the summed
//! squared deviation from the child means and leaves predict the mean;
//! absolute-error splits minimise the summed absolute deviation from the
//! child medians and leaves predict the median.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ndarray::ArrayView2;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Nodes in creation order; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf(value: f64) -> Self {
        Tree {
            nodes: vec![Node::Leaf { value }],
        }
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { value } => return value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(t: &Tree, i: usize) -> usize {
            match t.nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(t, left).max(walk(t, right)),
            }
        }
        walk(self, 0)
    }

    /// Features used by any split.
    pub fn split_features(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            Node::Split { feature, .. } => Some(*feature),
            Node::Leaf { .. } => None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Mse,
    Mae,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeParams {
    pub criterion: Criterion,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    /// Candidate features per split; `None` means all.
    pub max_features: Option<usize>,
}

/// Median of unsorted values (mean of the two middle values for even n).
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

fn leaf_value(criterion: Criterion, y: &[f64], idx: &[usize]) -> f64 {
    match criterion {
        Criterion::Mse => idx.iter().map(|&i| y[i]).sum::<f64>() / idx.len() as f64,
        Criterion::Mae => median(&mut idx.iter().map(|&i| y[i]).collect::<Vec<_>>()),
    }
}

/// Running sum of absolute deviations from the median under insertion.
struct MedianTracker {
    lower: BinaryHeap<OrdF64>,
    upper: BinaryHeap<Reverse<OrdF64>>,
    lower_sum: f64,
    upper_sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);
impl Eq for OrdF64 {}
impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl MedianTracker {
    fn new() -> Self {
        MedianTracker {
            lower: BinaryHeap::new(),
            upper: BinaryHeap::new(),
            lower_sum: 0.0,
            upper_sum: 0.0,
        }
    }

    fn push(&mut self, v: f64) {
        if self.lower.peek().is_none_or(|m| v <= m.0) {
            self.lower.push(OrdF64(v));
            self.lower_sum += v;
        } else {
            self.upper.push(Reverse(OrdF64(v)));
            self.upper_sum += v;
        }
        if self.lower.len() > self.upper.len() + 1 {
            let m = self.lower.pop().expect("nonempty").0;
            self.lower_sum -= m;
            self.upper.push(Reverse(OrdF64(m)));
            self.upper_sum += m;
        } else if self.upper.len() > self.lower.len() {
            let m = self.upper.pop().expect("nonempty").0 .0;
            self.upper_sum -= m;
            self.lower.push(OrdF64(m));
            self.lower_sum += m;
        }
    }

    /// Σ |v − median|; any point between the middle values gives the same sum.
    fn deviation(&self) -> f64 {
        match self.lower.peek() {
            None => 0.0,
            Some(m) => {
                let m = m.0;
                (m * self.lower.len() as f64 - self.lower_sum) + (self.upper_sum - m * self.upper.len() as f64)
            }
        }
    }
}

struct Candidate {
    /// Impurity after the split; lower is better.
    cost: f64,
    feature: usize,
    threshold: f64,
}

fn best_split_on(x: ArrayView2<f64>, y: &[f64], idx: &[usize], feature: usize, criterion: Criterion) -> Option<Candidate> {
    let mut sorted: Vec<usize> = idx.to_vec();
    sorted.sort_by(|&a, &b| x[[a, feature]].total_cmp(&x[[b, feature]]));
    let n = sorted.len();
    if x[[sorted[0], feature]] == x[[sorted[n - 1], feature]] {
        return None;
    }
    // left-prefix costs for sizes 1..n-1, then combine with suffix costs
    let mut left_cost = vec![0.0; n];
    let mut right_cost = vec![0.0; n];
    match criterion {
        Criterion::Mse => {
            let total: f64 = sorted.iter().map(|&i| y[i]).sum();
            let mut s = 0.0;
            for k in 1..n {
                s += y[sorted[k - 1]];
                // minimising SSE is maximising s²/k + (T−s)²/(n−k)
                left_cost[k] = -(s * s) / k as f64;
                right_cost[k] = -((total - s) * (total - s)) / (n - k) as f64;
            }
        }
        Criterion::Mae => {
            let mut t = MedianTracker::new();
            for k in 1..n {
                t.push(y[sorted[k - 1]]);
                left_cost[k] = t.deviation();
            }
            let mut t = MedianTracker::new();
            for k in (1..n).rev() {
                t.push(y[sorted[k]]);
                right_cost[k] = t.deviation();
            }
        }
    }
    let mut best: Option<Candidate> = None;
    for k in 1..n {
        let a = x[[sorted[k - 1], feature]];
        let b = x[[sorted[k], feature]];
        if a == b {
            continue;
        }
        let cost = left_cost[k] + right_cost[k];
        if best.as_ref().is_none_or(|c| cost < c.cost) {
            let mid = a + (b - a) / 2.0;
            best = Some(Candidate {
                cost,
                feature,
                threshold: if mid < b { mid } else { a },
            });
        }
    }
    best
}

fn node_cost(criterion: Criterion, y: &[f64], idx: &[usize]) -> f64 {
    match criterion {
        Criterion::Mse => {
            let s: f64 = idx.iter().map(|&i| y[i]).sum();
            -(s * s) / idx.len() as f64
        }
        Criterion::Mae => {
            let mut t = MedianTracker::new();
            idx.iter().for_each(|&i| t.push(y[i]));
            t.deviation()
        }
    }
}

/// Grows a tree on the rows `idx` (repeats allowed, e.g. a bootstrap).
pub fn build_tree<R: Rng>(x: ArrayView2<f64>, y: &[f64], idx: Vec<usize>, params: &TreeParams, rng: &mut R) -> Tree {
    let d = x.ncols();
    let mut nodes: Vec<Node> = Vec::new();
    // (node slot, rows, depth)
    let mut stack = vec![(0usize, idx, 0usize)];
    nodes.push(Node::Leaf { value: 0.0 });
    while let Some((slot, rows, depth)) = stack.pop() {
        let value = leaf_value(params.criterion, y, &rows);
        nodes[slot] = Node::Leaf { value };
        let pure = rows.iter().all(|&i| y[i] == y[rows[0]]);
        if pure || rows.len() < params.min_samples_split.max(2) || params.max_depth.is_some_and(|m| depth >= m) {
            continue;
        }
        let features: Vec<usize> = match params.max_features {
            Some(k) if k < d => sample(rng, d, k).into_vec(),
            _ => (0..d).collect(),
        };
        let mut best: Option<Candidate> = None;
        for f in features {
            if let Some(c) = best_split_on(x, y, &rows, f, params.criterion) {
                if best.as_ref().is_none_or(|b| c.cost < b.cost) {
                    best = Some(c);
                }
            }
        }
        let Some(best) = best else { continue };
        if best.cost >= node_cost(params.criterion, y, &rows) && params.criterion == Criterion::Mae {
            // no absolute-deviation gain
            continue;
        }
        let (left, right): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x[[i, best.feature]] <= best.threshold);
        let (l, r) = (nodes.len(), nodes.len() + 1);
        nodes.push(Node::Leaf { value: 0.0 });
        nodes.push(Node::Leaf { value: 0.0 });
        nodes[slot] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left: l,
            right: r,
        };
        stack.push((r, right, depth + 1));
        stack.push((l, left, depth + 1));
    }
    Tree { nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use ndarray::{array, Array2};
    use proptest::prelude::*;

    fn params(criterion: Criterion, max_depth: Option<usize>) -> TreeParams {
        TreeParams {
            criterion,
            max_depth,
            min_samples_split: 2,
            max_features: None,
        }
    }

    #[test]
    fn two_point_stump() {
        let x = array![[0.0], [1.0]];
        let y = [0.0, 1.0];
        let t = build_tree(x.view(), &y, vec![0, 1], &params(Criterion::Mse, Some(1)), &mut stream_rng(0, 0));
        assert_eq!(
            t.nodes[0],
            Node::Split {
                feature: 0,
                threshold: 0.5,
                left: 1,
                right: 2
            }
        );
        assert_eq!(t.predict_row(&[0.2]), 0.0);
        assert_eq!(t.predict_row(&[0.7]), 1.0);
    }

    #[test]
    fn depth_zero_is_the_mean() {
        let x = array![[0.0], [1.0], [2.0]];
        let t = build_tree(x.view(), &[1.0, 2.0, 6.0], vec![0, 1, 2], &params(Criterion::Mse, Some(0)), &mut stream_rng(0, 0));
        assert_eq!(t, Tree::leaf(3.0));
        let t = build_tree(x.view(), &[1.0, 2.0, 6.0], vec![0, 1, 2], &params(Criterion::Mae, Some(0)), &mut stream_rng(0, 0));
        assert_eq!(t, Tree::leaf(2.0));
    }

    fn exhaustive_best(x: &[f64], y: &[f64], mae: bool) -> f64 {
        // brute force over every threshold between distinct sorted values
        let mut xs: Vec<f64> = x.to_vec();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let mut best = (f64::INFINITY, f64::NAN);
        for w in xs.windows(2) {
            let th = (w[0] + w[1]) / 2.0;
            let cost = |side: Vec<f64>| -> f64 {
                if mae {
                    let mut s = side.clone();
                    let m = median(&mut s);
                    side.iter().map(|v| (v - m).abs()).sum()
                } else {
                    let m = side.iter().sum::<f64>() / side.len() as f64;
                    side.iter().map(|v| (v - m).powi(2)).sum()
                }
            };
            let l: Vec<f64> = x.iter().zip(y).filter(|(a, _)| **a <= th).map(|(_, b)| *b).collect();
            let r: Vec<f64> = x.iter().zip(y).filter(|(a, _)| **a > th).map(|(_, b)| *b).collect();
            let c = cost(l) + cost(r);
            if c < best.0 - 1e-9 {
                best = (c, th);
            }
        }
        best.1
    }

    proptest! {
        #[test]
        fn root_split_matches_exhaustive_search(pts in proptest::collection::vec((0u8..20, -5.0f64..5.0), 3..25), mae in any::<bool>()) {
            let x: Vec<f64> = pts.iter().map(|p| p.0 as f64).collect();
            let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
            prop_assume!(x.iter().any(|&v| v != x[0]));
            let xm = Array2::from_shape_vec((x.len(), 1), x.clone()).unwrap();
            let crit = if mae { Criterion::Mae } else { Criterion::Mse };
            let t = build_tree(xm.view(), &y, (0..x.len()).collect(), &params(crit, Some(1)), &mut stream_rng(0, 0));
            let oracle = exhaustive_best(&x, &y, mae);
            if let Node::Split { threshold, .. } = t.nodes[0] {
                // equal-cost alternatives are allowed; compare costs at both thresholds
                let cost_at = |th: f64| {
                    let l: Vec<f64> = x.iter().zip(&y).filter(|(a, _)| **a <= th).map(|(_, b)| *b).collect();
                    let r: Vec<f64> = x.iter().zip(&y).filter(|(a, _)| **a > th).map(|(_, b)| *b).collect();
                    let f = |side: &Vec<f64>| -> f64 {
                        if mae { let mut s = side.clone(); let m = median(&mut s); side.iter().map(|v| (v - m).abs()).sum() }
                        else { let m = side.iter().sum::<f64>() / side.len() as f64; side.iter().map(|v| (v - m).powi(2)).sum() }
                    };
                    f(&l) + f(&r)
                };
                prop_assert!((cost_at(threshold) - cost_at(oracle)).abs() < 1e-9);
            } else {
                // only a gainless absolute-error split may be declined
                prop_assert!(mae);
            }
        }

        #[test]
        fn predictions_within_target_range(pts in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0, -1.0f64..1.0), 2..40), depth in 1usize..6) {
            let n = pts.len();
            let x = Array2::from_shape_fn((n, 2), |(i, j)| if j == 0 { pts[i].0 } else { pts[i].1 });
            let y: Vec<f64> = pts.iter().map(|p| p.2).collect();
            let t = build_tree(x.view(), &y, (0..n).collect(), &params(Criterion::Mse, Some(depth)), &mut stream_rng(1, 0));
            let (lo, hi) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, &v| (a.0.min(v), a.1.max(v)));
            prop_assert!(t.depth() <= depth);
            for i in 0..n {
                let p = t.predict_row(&[x[[i, 0]], x[[i, 1]]]);
                prop_assert!(p >= lo && p <= hi);
            }
        }
    }

    #[test]
    fn median_tracker_matches_direct_computation() {
        let mut t = MedianTracker::new();
        let vals = [5.0, 1.0, 9.0, 3.0, 3.0, 8.0, -2.0];
        for k in 0..vals.len() {
            t.push(vals[k]);
            let mut s = vals[..=k].to_vec();
            let m = median(&mut s);
            let direct: f64 = vals[..=k].iter().map(|v| (v - m).abs()).sum();
            assert!((t.deviation() - direct).abs() < 1e-12);
        }
    }
}
