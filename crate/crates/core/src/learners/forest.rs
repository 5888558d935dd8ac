//! Random forest regressor: bootstrap samples of size n, ⌈d/3⌉ candidate
//! features per split, prediction is the mean of the trees.

use ndarray::ArrayView2;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::rng::stream_rng;

use super::tree::{build_tree, Criterion, Tree, TreeParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfrParams {
    pub n_estimators: usize,
    pub criterion: Criterion,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub bootstrap: bool,
}

impl Default for RfrParams {
    fn default() -> Self {
        RfrParams {
            n_estimators: 100,
            criterion: Criterion::Mse,
            max_depth: Some(20),
            min_samples_split: 2,
            bootstrap: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub trees: Vec<Tree>,
}

impl Forest {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict_row(row)).sum::<f64>() / self.trees.len() as f64
    }
}

pub fn candidate_features(d: usize) -> usize {
    d.div_ceil(3).max(1)
}

pub fn train_rfr(x: ArrayView2<f64>, y: &[f64], hp: &RfrParams, seed: u64) -> Result<Forest> {
    let n = x.nrows();
    if n == 0 || n != y.len() {
        return Err(CoreError::LengthMismatch { left: n, right: y.len() });
    }
    if hp.n_estimators == 0 {
        return Err(CoreError::InvalidHyperparameters("n_estimators must be positive".into()));
    }
    let params = TreeParams {
        criterion: hp.criterion,
        max_depth: hp.max_depth,
        min_samples_split: hp.min_samples_split,
        max_features: Some(candidate_features(x.ncols())),
    };
    let trees = (0..hp.n_estimators)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, t as u64);
            let idx: Vec<usize> = if hp.bootstrap {
                (0..n).map(|_| rng.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            build_tree(x, y, idx, &params, &mut rng)
        })
        .collect();
    Ok(Forest { trees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn data(n: usize, seed: u64) -> (Array2<f64>, Vec<f64>) {
        let mut rng = stream_rng(seed, 5);
        let x = Array2::<f64>::from_shape_fn((n, 4), |_| rng.gen_range(0.0..1.0));
        let y = x.rows().into_iter().map(|r| (6.0 * r[0]).sin() + r[1] * r[2]).collect();
        (x, y)
    }

    #[test]
    fn prediction_is_exact_tree_mean() {
        let (x, y) = data(120, 1);
        let f = train_rfr(x.view(), &y, &RfrParams { n_estimators: 17, ..RfrParams::default() }, 9).unwrap();
        for i in 0..20 {
            let row = x.row(i).to_vec();
            let mut s = 0.0;
            for t in &f.trees {
                s += t.predict_row(&row);
            }
            assert_eq!(f.predict_row(&row), s / 17.0);
        }
    }

    #[test]
    fn constant_target_and_range_bound() {
        let (x, _) = data(50, 2);
        let y = vec![0.42; 50];
        let f = train_rfr(x.view(), &y, &RfrParams { n_estimators: 5, ..RfrParams::default() }, 1).unwrap();
        assert!((0..50).all(|i| (f.predict_row(&x.row(i).to_vec()) - 0.42).abs() < 1e-15));

        let (x, y) = data(80, 3);
        let f = train_rfr(x.view(), &y, &RfrParams { n_estimators: 10, ..RfrParams::default() }, 2).unwrap();
        let (lo, hi) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, &v| (a.0.min(v), a.1.max(v)));
        assert!((0..80).all(|i| {
            let p = f.predict_row(&x.row(i).to_vec());
            p >= lo && p <= hi
        }));
    }

    #[test]
    fn deterministic_and_fits() {
        let (x, y) = data(200, 4);
        let hp = RfrParams {
            n_estimators: 20,
            ..RfrParams::default()
        };
        let a = train_rfr(x.view(), &y, &hp, 3).unwrap();
        assert_eq!(a, train_rfr(x.view(), &y, &hp, 3).unwrap());
        let mae = RfrParams {
            criterion: Criterion::Mae,
            n_estimators: 5,
            ..hp
        };
        let m = train_rfr(x.view(), &y, &mae, 3).unwrap();
        let err: f64 = (0..200).map(|i| (m.predict_row(&x.row(i).to_vec()) - y[i]).abs()).sum::<f64>() / 200.0;
        assert!(err < 0.2, "{err}");
        assert_eq!(candidate_features(296), 99);
        assert_eq!(candidate_features(1), 1);
    }
}
