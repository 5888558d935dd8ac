//! Linear regression by stochastic gradient descent.
//!
//! Schedules: constant `η0`; invscaling `η0 / t^0.25`; optimal
//! `1 / (α (t0 + t))` with `t0 = 1 / (α η0)` so the first step is `η0`;
//! adaptive keeps `η0` and halves it whenever an epoch's mean loss fails to
//! improve on the best by `tol`.

use ndarray::ArrayView2;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SgdLoss {
    SquaredLoss,
    Huber,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Penalty {
    L2,
    L1,
    Elasticnet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    Invscaling,
    Optimal,
    Constant,
    Adaptive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SgdrParams {
    pub loss: SgdLoss,
    pub penalty: Penalty,
    pub learning_rate: Schedule,
    /// Epochs over the training rows.
    pub max_iter: usize,
    pub alpha: f64,
    pub l1_ratio: f64,
    pub eta0: f64,
    pub power_t: f64,
    /// Huber transition point.
    pub epsilon: f64,
    pub tol: f64,
}

impl Default for SgdrParams {
    fn default() -> Self {
        SgdrParams {
            loss: SgdLoss::SquaredLoss,
            penalty: Penalty::L2,
            learning_rate: Schedule::Invscaling,
            max_iter: 50,
            alpha: 1e-4,
            l1_ratio: 0.15,
            eta0: 0.01,
            power_t: 0.25,
            epsilon: 0.1,
            tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl LinearModel {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.weights.iter().zip(row).map(|(w, x)| w * x).sum::<f64>() + self.intercept
    }
}

fn loss_and_derivative(loss: SgdLoss, epsilon: f64, residual: f64) -> (f64, f64) {
    match loss {
        SgdLoss::SquaredLoss => (0.5 * residual * residual, residual),
        SgdLoss::Huber if residual.abs() <= epsilon => (0.5 * residual * residual, residual),
        SgdLoss::Huber => (epsilon * (residual.abs() - 0.5 * epsilon), epsilon * residual.signum()),
    }
}

pub fn train_sgdr(x: ArrayView2<f64>, y: &[f64], hp: &SgdrParams, seed: u64) -> Result<LinearModel> {
    let (n, d) = x.dim();
    if n == 0 || n != y.len() {
        return Err(CoreError::LengthMismatch { left: n, right: y.len() });
    }
    if hp.eta0 <= 0.0 || hp.alpha < 0.0 || !(0.0..=1.0).contains(&hp.l1_ratio) {
        return Err(CoreError::InvalidHyperparameters(format!("{hp:?}")));
    }
    if hp.learning_rate == Schedule::Optimal && hp.alpha <= 0.0 {
        return Err(CoreError::InvalidHyperparameters("optimal schedule needs alpha > 0".into()));
    }
    let (l2, l1) = match hp.penalty {
        Penalty::L2 => (hp.alpha, 0.0),
        Penalty::L1 => (0.0, hp.alpha),
        Penalty::Elasticnet => (hp.alpha * (1.0 - hp.l1_ratio), hp.alpha * hp.l1_ratio),
    };
    let mut rng = stream_rng(seed, 0);
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..n).collect();
    let mut eta = hp.eta0;
    let mut best = f64::INFINITY;
    let mut t = 1.0_f64;
    let t0 = if hp.alpha > 0.0 { 1.0 / (hp.alpha * hp.eta0) } else { 0.0 };
    for epoch in 0..hp.max_iter {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for &i in &order {
            let row = x.row(i);
            let pred = w.iter().zip(row.iter()).map(|(a, v)| a * v).sum::<f64>() + b;
            let (l, g) = loss_and_derivative(hp.loss, hp.epsilon, pred - y[i]);
            total += l;
            let step = match hp.learning_rate {
                Schedule::Constant | Schedule::Adaptive => eta,
                Schedule::Invscaling => hp.eta0 / t.powf(hp.power_t),
                Schedule::Optimal => 1.0 / (hp.alpha * (t0 + t - 1.0)),
            };
            for (wj, &xj) in w.iter_mut().zip(row.iter()) {
                let mut next = *wj - step * (g * xj + l2 * *wj);
                if l1 > 0.0 {
                    // truncated step: shrink toward zero without crossing it
                    let shrunk = next.abs() - step * l1;
                    next = if shrunk > 0.0 { shrunk * next.signum() } else { 0.0 };
                }
                *wj = next;
            }
            b -= step * g;
            t += 1.0;
        }
        let mean = total / n as f64;
        if !mean.is_finite() || !b.is_finite() || w.iter().any(|v| !v.is_finite() || v.abs() > 1e100) {
            return Err(CoreError::Diverged(format!("SGDR loss {mean} at epoch {epoch}")));
        }
        if hp.learning_rate == Schedule::Adaptive {
            if mean > best - hp.tol {
                eta /= 2.0;
            }
            if eta < 1e-9 {
                break;
            }
        }
        best = best.min(mean);
    }
    Ok(LinearModel { weights: w, intercept: b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use rand::Rng;

    fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / x.iter().map(|a| (a - mx).powi(2)).sum::<f64>()
    }

    #[test]
    fn recovers_noiseless_slope() {
        let mut rng = stream_rng(1, 0);
        let xs: Vec<f64> = (0..200).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = xs.iter().map(|v| 3.0 * v + 1.0).collect();
        let x = Array2::from_shape_vec((200, 1), xs.clone()).unwrap();
        let hp = SgdrParams {
            learning_rate: Schedule::Constant,
            alpha: 1e-10,
            max_iter: 200,
            ..SgdrParams::default()
        };
        let m = train_sgdr(x.view(), &y, &hp, 3).unwrap();
        let oracle = least_squares_slope(&xs, &y);
        assert!((m.weights[0] - oracle).abs() < 1e-2, "{} vs {oracle}", m.weights[0]);
        assert!((m.intercept - 1.0).abs() < 1e-2);
    }

    #[test]
    fn constant_features_give_mean_intercept() {
        let x = Array2::zeros((50, 3));
        let y: Vec<f64> = (0..50).map(|i| (i % 5) as f64).collect();
        let hp = SgdrParams {
            max_iter: 300,
            eta0: 0.05,
            ..SgdrParams::default()
        };
        let m = train_sgdr(x.view(), &y, &hp, 1).unwrap();
        assert!((m.intercept - 2.0).abs() < 5e-2, "{}", m.intercept);
        assert!(m.weights.iter().all(|&w| w == 0.0));
    }

    #[test]
    fn huber_resists_an_outlier() {
        let mut rng = stream_rng(2, 0);
        let xs: Vec<f64> = (0..100).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut y: Vec<f64> = xs.iter().map(|v| 2.0 * v).collect();
        let clean = least_squares_slope(&xs[1..], &y[1..]);
        y[0] = 500.0;
        let x = Array2::from_shape_vec((100, 1), xs).unwrap();
        let base = SgdrParams {
            learning_rate: Schedule::Constant,
            alpha: 1e-10,
            max_iter: 200,
            epsilon: 0.5,
            ..SgdrParams::default()
        };
        let sq = train_sgdr(x.view(), &y, &base, 5).unwrap();
        let hu = train_sgdr(x.view(), &y, &SgdrParams { loss: SgdLoss::Huber, ..base }, 5).unwrap();
        assert!((hu.weights[0] - clean).abs() < (sq.weights[0] - clean).abs());
    }

    #[test]
    fn divergence_is_an_error() {
        let x = Array2::from_shape_vec((20, 1), (0..20).map(|i| i as f64 * 100.0).collect()).unwrap();
        let y: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let hp = SgdrParams {
            learning_rate: Schedule::Constant,
            eta0: 10.0,
            max_iter: 50,
            ..SgdrParams::default()
        };
        assert!(matches!(train_sgdr(x.view(), &y, &hp, 1), Err(CoreError::Diverged(_))));
    }

    #[test]
    fn l1_and_schedules_run() {
        let mut rng = stream_rng(4, 0);
        let data: Vec<f64> = (0..300).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = Array2::from_shape_vec((100, 3), data).unwrap();
        let y: Vec<f64> = x.rows().into_iter().map(|r| r[0] - 0.5 * r[1]).collect();
        for penalty in [Penalty::L2, Penalty::L1, Penalty::Elasticnet] {
            for lr in [Schedule::Invscaling, Schedule::Optimal, Schedule::Constant, Schedule::Adaptive] {
                let hp = SgdrParams {
                    penalty,
                    learning_rate: lr,
                    max_iter: 100,
                    ..SgdrParams::default()
                };
                let m = train_sgdr(x.view(), &y, &hp, 7).unwrap();
                assert!((m.weights[0] - 1.0).abs() < 0.2, "{penalty:?} {lr:?} {m:?}");
                assert_eq!(m, train_sgdr(x.view(), &y, &hp, 7).unwrap());
            }
        }
    }
}
