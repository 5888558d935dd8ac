//! Fully connected feed-forward regressor trained by plain mini-batch
//! gradient descent on half the mean squared error.
//!
//! Weights start uniform in `±√(6 / (fan_in + fan_out))`, biases at zero.
//! The output unit is linear.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Tanh,
    Logistic,
    Identity,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::Tanh => z.tanh(),
            Activation::Logistic => 1.0 / (1.0 + (-z).exp()),
            Activation::Identity => z,
        }
    }

    /// Derivative expressed through the activation value `a`.
    fn derivative(self, a: f64) -> f64 {
        match self {
            Activation::Relu => {
                if a > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => 1.0 - a * a,
            Activation::Logistic => a * (1.0 - a),
            Activation::Identity => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearningRateMode {
    Constant,
    /// Halve the rate when an epoch fails to improve the best loss by `tol`.
    Adaptive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub hidden_layer_sizes: Vec<usize>,
    pub activation: Activation,
    pub learning_rate: LearningRateMode,
    pub epochs: usize,
    pub learning_rate_init: f64,
    pub batch_size: usize,
    pub tol: f64,
}

impl Default for MlpParams {
    fn default() -> Self {
        MlpParams {
            hidden_layer_sizes: vec![128, 64],
            activation: Activation::Tanh,
            learning_rate: LearningRateMode::Constant,
            epochs: 100,
            learning_rate_init: 0.01,
            batch_size: 64,
            tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub inputs: usize,
    pub outputs: usize,
    /// Row-major `outputs × inputs`.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Layer {
    fn weight_view(&self) -> ArrayView2<'_, f64> {
        ArrayView2::from_shape((self.outputs, self.inputs), &self.weights).expect("layer shape")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub activation: Activation,
    pub layers: Vec<Layer>,
}

impl MlpModel {
    /// Freshly initialised network for `inputs` features.
    pub fn initialise(inputs: usize, hidden: &[usize], activation: Activation, seed: u64) -> Self {
        let mut rng = stream_rng(seed, 0);
        let mut sizes = vec![inputs];
        sizes.extend_from_slice(hidden);
        sizes.push(1);
        let layers = sizes
            .windows(2)
            .map(|w| {
                let bound = (6.0 / (w[0] + w[1]) as f64).sqrt();
                Layer {
                    inputs: w[0],
                    outputs: w[1],
                    weights: (0..w[0] * w[1]).map(|_| rng.gen_range(-bound..bound)).collect(),
                    bias: vec![0.0; w[1]],
                }
            })
            .collect();
        MlpModel { activation, layers }
    }

    pub fn parameter_count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    /// Flat parameters: per layer, weights then biases.
    pub fn parameters(&self) -> Vec<f64> {
        self.layers.iter().flat_map(|l| l.weights.iter().chain(&l.bias).copied()).collect()
    }

    pub fn set_parameters(&mut self, p: &[f64]) {
        assert_eq!(p.len(), self.parameter_count());
        let mut k = 0;
        for l in &mut self.layers {
            for v in l.weights.iter_mut().chain(l.bias.iter_mut()) {
                *v = p[k];
                k += 1;
            }
        }
    }

    /// Activations of every layer, input first; the last is the output.
    fn forward(&self, x: ArrayView2<f64>) -> Vec<Array2<f64>> {
        let mut acts = vec![x.to_owned()];
        let last = self.layers.len() - 1;
        for (i, l) in self.layers.iter().enumerate() {
            let mut z = acts[i].dot(&l.weight_view().t());
            z += &Array1::from(l.bias.clone());
            if i < last {
                z.mapv_inplace(|v| self.activation.apply(v));
            }
            acts.push(z);
        }
        acts
    }

    pub fn predict(&self, x: ArrayView2<f64>) -> Vec<f64> {
        self.forward(x).pop().expect("output layer").column(0).to_vec()
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let x = ArrayView2::from_shape((1, row.len()), row).expect("row shape");
        self.predict(x)[0]
    }

    /// Loss `Σ (ŷ − y)² / (2n)` and its gradient in [`Self::parameters`] order.
    pub fn loss_and_gradient(&self, x: ArrayView2<f64>, y: &[f64]) -> (f64, Vec<f64>) {
        let n = y.len() as f64;
        let acts = self.forward(x);
        let out = acts.last().expect("output");
        let mut delta = Array2::zeros((y.len(), 1));
        let mut loss = 0.0;
        for (i, &t) in y.iter().enumerate() {
            let r = out[[i, 0]] - t;
            loss += r * r;
            delta[[i, 0]] = r / n;
        }
        loss /= 2.0 * n;
        let mut grads: Vec<(Array2<f64>, Array1<f64>)> = Vec::with_capacity(self.layers.len());
        for li in (0..self.layers.len()).rev() {
            let gw = delta.t().dot(&acts[li]);
            let gb = delta.sum_axis(Axis(0));
            if li > 0 {
                let mut next = delta.dot(&self.layers[li].weight_view());
                next.zip_mut_with(&acts[li], |d, &a| *d *= self.activation.derivative(a));
                delta = next;
            }
            grads.push((gw, gb));
        }
        grads.reverse();
        let flat = grads.into_iter().flat_map(|(gw, gb)| gw.into_iter().chain(gb)).collect();
        (loss, flat)
    }
}

pub fn train_mlp(x: ArrayView2<f64>, y: &[f64], hp: &MlpParams, seed: u64) -> Result<MlpModel> {
    let n = x.nrows();
    if n == 0 || n != y.len() {
        return Err(CoreError::LengthMismatch { left: n, right: y.len() });
    }
    if hp.batch_size == 0 || hp.learning_rate_init <= 0.0 || hp.hidden_layer_sizes.contains(&0) {
        return Err(CoreError::InvalidHyperparameters(format!("{hp:?}")));
    }
    let mut model = MlpModel::initialise(x.ncols(), &hp.hidden_layer_sizes, hp.activation, seed);
    let mut rng = stream_rng(seed, 1);
    let mut order: Vec<usize> = (0..n).collect();
    let mut eta = hp.learning_rate_init;
    let mut best = f64::INFINITY;
    for epoch in 0..hp.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for batch in order.chunks(hp.batch_size) {
            let xb = x.select(Axis(0), batch);
            let yb: Vec<f64> = batch.iter().map(|&i| y[i]).collect();
            let (loss, grad) = model.loss_and_gradient(xb.view(), &yb);
            total += loss * batch.len() as f64;
            let mut k = 0;
            for l in &mut model.layers {
                for v in l.weights.iter_mut().chain(l.bias.iter_mut()) {
                    *v -= eta * grad[k];
                    k += 1;
                }
            }
        }
        let mean = total / n as f64;
        if !mean.is_finite() || model.layers.iter().any(|l| l.weights.iter().chain(&l.bias).any(|p| !p.is_finite())) {
            return Err(CoreError::Diverged(format!("MLP loss {mean} at epoch {epoch}")));
        }
        if hp.learning_rate == LearningRateMode::Adaptive && mean > best - hp.tol {
            eta /= 2.0;
        }
        best = best.min(mean);
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn random_batch(n: usize, d: usize, seed: u64) -> (Array2<f64>, Vec<f64>) {
        let mut rng = stream_rng(seed, 9);
        let x = Array2::<f64>::from_shape_fn((n, d), |_| rng.gen_range(-1.0..1.0));
        let y = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        (x, y)
    }

    pub(crate) fn gradient_check(model: &MlpModel, x: ArrayView2<f64>, y: &[f64]) -> f64 {
        let (_, analytic) = model.loss_and_gradient(x, y);
        let base = model.parameters();
        let h = 1e-6;
        let mut worst: f64 = 0.0;
        let mut probe = model.clone();
        for k in 0..base.len() {
            let mut p = base.clone();
            p[k] += h;
            probe.set_parameters(&p);
            let up = probe.loss_and_gradient(x, y).0;
            p[k] -= 2.0 * h;
            probe.set_parameters(&p);
            let down = probe.loss_and_gradient(x, y).0;
            let numeric = (up - down) / (2.0 * h);
            let scale = analytic[k].abs().max(numeric.abs()).max(1e-4);
            worst = worst.max((analytic[k] - numeric).abs() / scale);
        }
        worst
    }

    #[test]
    fn gradients_match_finite_differences() {
        for (i, act) in [Activation::Tanh, Activation::Logistic, Activation::Identity].into_iter().enumerate() {
            let model = MlpModel::initialise(3, &[5, 4], act, i as u64);
            let (x, y) = random_batch(7, 3, i as u64);
            let err = gradient_check(&model, x.view(), &y);
            assert!(err < 1e-5, "{act:?}: {err}");
        }
    }

    #[test]
    fn identity_unit_learns_doubling() {
        let x = Array2::from_shape_fn((64, 1), |(i, _)| i as f64 / 32.0 - 1.0);
        let y: Vec<f64> = x.column(0).iter().map(|v| 2.0 * v).collect();
        let hp = MlpParams {
            hidden_layer_sizes: vec![1],
            activation: Activation::Identity,
            epochs: 500,
            learning_rate_init: 0.05,
            batch_size: 16,
            ..MlpParams::default()
        };
        let m = train_mlp(x.view(), &y, &hp, 3).unwrap();
        for (i, &t) in y.iter().enumerate() {
            assert!((m.predict_row(&[x[[i, 0]]]) - t).abs() < 1e-2);
        }
    }

    #[test]
    fn zero_epochs_keeps_initial_network() {
        let (x, y) = random_batch(10, 4, 1);
        let hp = MlpParams {
            hidden_layer_sizes: vec![6, 3],
            epochs: 0,
            ..MlpParams::default()
        };
        let m = train_mlp(x.view(), &y, &hp, 42).unwrap();
        assert_eq!(m, MlpModel::initialise(4, &[6, 3], Activation::Tanh, 42));
        let bound = (6.0f64 / 10.0).sqrt();
        assert!(m.layers[0].weights.iter().all(|w| w.abs() <= bound));
    }

    #[test]
    fn batch_and_row_predictions_agree() {
        let (x, y) = random_batch(30, 2, 2);
        let hp = MlpParams {
            hidden_layer_sizes: vec![8],
            activation: Activation::Relu,
            epochs: 5,
            ..MlpParams::default()
        };
        let m = train_mlp(x.view(), &y, &hp, 1).unwrap();
        let batch = m.predict(x.view());
        for i in 0..30 {
            let row = x.row(i).to_vec();
            assert!((batch[i] - m.predict_row(&row)).abs() < 1e-12);
        }
    }
}
