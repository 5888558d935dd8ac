//! Direction of a metric's relationship with Coverageability: Pearson r with
//! a two-sided Student-t p-value, labelled Unknown when p > 0.05.

use std::fmt;
use std::io::Write;

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use crate::error::{CoreError, Result};

pub const SIGNIFICANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Impact {
    Positive,
    Negative,
    Unknown,
}

impl fmt::Display for Impact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpactRecord {
    pub metric: String,
    /// `None` when the metric is constant over the rows.
    pub correlation: Option<f64>,
    pub p_value: Option<f64>,
    pub impact: Impact,
}

/// Two-sided p-value of `t` under Student-t with `df` degrees of freedom.
pub fn student_t_two_sided(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    beta_reg(df / 2.0, 0.5, df / (df + t * t))
}

/// Product-moment r and its two-sided p-value.
pub fn pearson_correlation(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(CoreError::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 3 {
        return Err(CoreError::UndefinedCorrelation("fewer than 3 observations"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(CoreError::UndefinedCorrelation("zero variance"));
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    let df = n - 2.0;
    let p = if r.abs() == 1.0 {
        0.0
    } else {
        student_t_two_sided(r * (df / (1.0 - r * r)).sqrt(), df)
    };
    Ok((r, p))
}

pub fn classify_impact(r: f64, p: f64) -> Impact {
    if p > SIGNIFICANCE || r == 0.0 {
        Impact::Unknown
    } else if r > 0.0 {
        Impact::Positive
    } else {
        Impact::Negative
    }
}

/// One record per listed column of `x` against `y`.
pub fn impact_table(names: &[String], x: ArrayView2<f64>, y: &[f64], columns: &[usize]) -> Result<Vec<ImpactRecord>> {
    columns
        .iter()
        .map(|&j| {
            let col = x.column(j).to_vec();
            match pearson_correlation(&col, y) {
                Ok((r, p)) => Ok(ImpactRecord {
                    metric: names[j].clone(),
                    correlation: Some(r),
                    p_value: Some(p),
                    impact: classify_impact(r, p),
                }),
                Err(CoreError::UndefinedCorrelation(why)) => {
                    log::warn!("{}: correlation undefined ({why})", names[j]);
                    Ok(ImpactRecord {
                        metric: names[j].clone(),
                        correlation: None,
                        p_value: None,
                        impact: Impact::Unknown,
                    })
                }
                Err(e) => Err(e),
            }
        })
        .collect()
}

pub fn write_impact<W: Write>(records: &[ImpactRecord], out: W) -> Result<()> {
    let fail = |e: csv::Error| CoreError::Format(e.to_string());
    let mut w = crate::csv_writer(out);
    w.write_record(["Metric", "Correlation", "P-value", "Impact"]).map_err(fail)?;
    let cell = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |v| v.to_string());
    for r in records {
        w.write_record([r.metric.clone(), cell(r.correlation), cell(r.p_value), r.impact.to_string()])
            .map_err(fail)?;
    }
    w.flush().map_err(|e| CoreError::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const XS: [f64; 10] = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];
    const YS: [f64; 10] = [2.1, 3.9, 2.5, 5.2, 4.4, 6.8, 5.1, 7.7, 6.0, 8.3];

    /// Two-sided tail by composite Simpson integration of the t density.
    fn tail_by_quadrature(t: f64, df: f64) -> f64 {
        let ln_c = statrs::function::gamma::ln_gamma((df + 1.0) / 2.0)
            - statrs::function::gamma::ln_gamma(df / 2.0)
            - 0.5 * (df * std::f64::consts::PI).ln();
        let f = |s: f64| (ln_c - (df + 1.0) / 2.0 * (1.0 + s * s / df).ln()).exp();
        let steps = 20_000;
        let h = t.abs() / steps as f64;
        let mut acc = f(0.0) + f(t.abs());
        for i in 1..steps {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        1.0 - 2.0 * acc * h / 3.0
    }

    #[test]
    fn fixture_matches_direct_formula() {
        let (r, p) = pearson_correlation(&XS, &YS).unwrap();
        let n = 10.0;
        let (sx, sy) = (XS.iter().sum::<f64>(), YS.iter().sum::<f64>());
        let sxy: f64 = XS.iter().zip(&YS).map(|(a, b)| a * b).sum();
        let sxx: f64 = XS.iter().map(|a| a * a).sum();
        let syy: f64 = YS.iter().map(|b| b * b).sum();
        let oracle = (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt());
        assert!((r - oracle).abs() < 1e-9);
        let t = oracle * (8.0 / (1.0 - oracle * oracle)).sqrt();
        assert!((p - tail_by_quadrature(t, 8.0)).abs() < 1e-9, "{p}");
    }

    #[test]
    fn perfect_correlations_and_errors() {
        let up: Vec<f64> = XS.to_vec();
        let down: Vec<f64> = XS.iter().map(|x| -2.0 * x + 5.0).collect();
        let (r, p) = pearson_correlation(&XS, &up).unwrap();
        assert!((r - 1.0).abs() < 1e-15 && p < 1e-12);
        assert!((pearson_correlation(&XS, &down).unwrap().0 + 1.0).abs() < 1e-15);
        assert!(matches!(pearson_correlation(&XS, &[1.0; 10]), Err(CoreError::UndefinedCorrelation(_))));
        assert!(pearson_correlation(&XS[..2], &YS[..2]).is_err());
    }

    #[test]
    fn classification_rule() {
        assert_eq!(classify_impact(-0.00820, 0.297), Impact::Unknown);
        assert_eq!(classify_impact(0.14445, 0.0009), Impact::Positive);
        assert_eq!(classify_impact(-0.31905, 1e-30), Impact::Negative);
        assert_eq!(classify_impact(0.5, 0.05), Impact::Positive);
        assert_eq!(classify_impact(0.0, 0.01), Impact::Unknown);
    }

    #[test]
    fn table_marks_constant_columns() {
        let x = ndarray::Array2::from_shape_fn((10, 2), |(i, j)| if j == 0 { XS[i] } else { 3.0 });
        let names = vec!["A".to_string(), "B".into()];
        let t = impact_table(&names, x.view(), &YS, &[0, 1]).unwrap();
        assert_eq!(t[0].impact, Impact::Positive);
        assert_eq!((t[1].correlation, t[1].impact), (None, Impact::Unknown));
        let mut buf = Vec::new();
        write_impact(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("Metric,Correlation,P-value,Impact\n") && text.contains("B,undefined,undefined,Unknown"));
    }

    proptest! {
        #[test]
        fn affine_invariance(pts in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 4..30), a in 0.1f64..10.0, b in -5.0f64..5.0) {
            let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
            if let Ok((r, _)) = pearson_correlation(&x, &y) {
                let xs: Vec<f64> = x.iter().map(|v| a * v + b).collect();
                let neg: Vec<f64> = y.iter().map(|v| -v).collect();
                prop_assert!((pearson_correlation(&xs, &y).unwrap().0 - r).abs() < 1e-9);
                prop_assert!((pearson_correlation(&x, &neg).unwrap().0 + r).abs() < 1e-12);
            }
        }
    }
}
