//! Regression error report: MAE, MSE, RMSE, MSLgE, MdAE and R².

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CoreError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub n: usize,
    #[serde(rename = "MAE")]
    pub mae: f64,
    #[serde(rename = "MSE")]
    pub mse: f64,
    #[serde(rename = "RMSE")]
    pub rmse: f64,
    /// Absent when any actual or predicted value is negative.
    #[serde(rename = "MSLgE")]
    pub mslge: Option<f64>,
    #[serde(rename = "MdAE")]
    pub mdae: f64,
    /// `-inf` when y is constant and the residuals are not all zero.
    #[serde(rename = "R2", serialize_with = "ser_real", deserialize_with = "de_real")]
    pub r2: f64,
    #[serde(rename = "R2_undefined")]
    pub r2_undefined: bool,
}

fn ser_real<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

fn de_real<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Real {
        Number(f64),
        Text(String),
    }
    match Real::deserialize(d)? {
        Real::Number(v) => Ok(v),
        Real::Text(t) => t.parse::<f64>().map_err(serde::de::Error::custom),
    }
}

/// Median with the two middle values averaged for even lengths.
pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

pub fn rmse(y: &[f64], pred: &[f64]) -> f64 {
    (y.iter().zip(pred).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / y.len() as f64).sqrt()
}

pub fn evaluate(y: &[f64], pred: &[f64]) -> Result<EvaluationReport> {
    if y.len() != pred.len() {
        return Err(CoreError::LengthMismatch { left: y.len(), right: pred.len() });
    }
    if y.is_empty() {
        return Err(CoreError::Empty("evaluation needs at least one prediction"));
    }
    let n = y.len() as f64;
    let mut abs: Vec<f64> = y.iter().zip(pred).map(|(a, b)| (a - b).abs()).collect();
    let mae = abs.iter().sum::<f64>() / n;
    let ss_res = y.iter().zip(pred).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
    let mse = ss_res / n;
    let rmse = mse.sqrt();
    let mslge = if y.iter().chain(pred).all(|v| *v >= 0.0) {
        Some(y.iter().zip(pred).map(|(a, b)| (a.ln_1p() - b.ln_1p()).powi(2)).sum::<f64>() / n)
    } else {
        None
    };
    let mdae = median(&mut abs);
    let mean = y.iter().sum::<f64>() / n;
    let ss_tot = y.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>();
    let (r2, r2_undefined) = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot, false)
    } else if ss_res == 0.0 {
        (1.0, false)
    } else {
        (f64::NEG_INFINITY, true)
    };
    Ok(EvaluationReport {
        n: y.len(),
        mae,
        mse,
        rmse,
        mslge,
        mdae,
        r2,
        r2_undefined,
    })
}
