//! Weighted voting regressor over the four base learners, in the order
//! SGDR, MLPR, RFR, HGBR.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

use super::Learned;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoterModel {
    /// `None` weighs all members equally.
    pub weights: Option<[f64; 4]>,
    pub members: Vec<Learned>,
}

pub fn check_weights(weights: &Option<[f64; 4]>) -> Result<()> {
    if let Some(w) = weights {
        if w.iter().any(|v| !v.is_finite() || *v < 0.0) || w.iter().sum::<f64>() <= 0.0 {
            return Err(CoreError::InvalidHyperparameters(format!("voter weights {w:?}")));
        }
    }
    Ok(())
}

pub fn train_vor(members: Vec<Learned>, weights: Option<[f64; 4]>) -> Result<VoterModel> {
    check_weights(&weights)?;
    if members.len() != 4 || members.iter().any(|m| matches!(m, Learned::Voter(_))) {
        return Err(CoreError::InvalidHyperparameters("a voter combines exactly four base models".into()));
    }
    Ok(VoterModel { weights, members })
}

/// `Σ wᵢ pᵢ / Σ wᵢ`; zero-weight members are not evaluated.
pub fn combine(weights: &Option<[f64; 4]>, predictions: impl Fn(usize) -> f64) -> f64 {
    match weights {
        None => (0..4).map(&predictions).sum::<f64>() / 4.0,
        Some(w) => {
            let mut num = 0.0;
            for (i, &wi) in w.iter().enumerate() {
                if wi != 0.0 {
                    num += wi * predictions(i);
                }
            }
            num / w.iter().sum::<f64>()
        }
    }
}

impl VoterModel {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        combine(&self.weights, |i| self.members[i].predict_row(row))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::linear::LinearModel;

    fn constant(v: f64) -> Learned {
        Learned::Linear(LinearModel {
            weights: vec![0.0],
            intercept: v,
        })
    }

    fn voter(weights: Option<[f64; 4]>) -> VoterModel {
        train_vor(vec![constant(10.0), constant(0.3), constant(0.6), constant(0.9)], weights).unwrap()
    }

    #[test]
    fn weighted_examples() {
        let v = voter(Some([0.0, 1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0]));
        assert!((v.predict_row(&[1.0]) - 0.7).abs() < 1e-12);
        assert_eq!(voter(Some([1.0, 0.0, 0.0, 0.0])).predict_row(&[0.0]), 10.0);
        let eq = voter(Some([2.0; 4])).predict_row(&[0.0]);
        assert!((eq - 11.8 / 4.0).abs() < 1e-12);
        assert!((voter(None).predict_row(&[0.0]) - 11.8 / 4.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_weights() {
        let m = || vec![constant(0.0), constant(0.0), constant(0.0), constant(0.0)];
        assert!(train_vor(m(), Some([0.0; 4])).is_err());
        assert!(train_vor(m(), Some([-1.0, 1.0, 1.0, 1.0])).is_err());
        assert!(train_vor(m()[..3].to_vec(), None).is_err());
    }

    proptest::proptest! {
        #[test]
        fn scaling_weights_changes_nothing(w in proptest::array::uniform4(0.0f64..5.0), c in 0.01f64..100.0, p in proptest::array::uniform4(-3.0f64..3.0)) {
            proptest::prop_assume!(w.iter().sum::<f64>() > 0.01);
            let scaled = w.map(|v| v * c);
            let a = combine(&Some(w), |i| p[i]);
            let b = combine(&Some(scaled), |i| p[i]);
            proptest::prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}
