//! Robust scaling: `(x − median) / IQR`, with quartiles by linear
//! interpolation between order statistics. Features with zero IQR are only
//! centred.

use ndarray::{Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustScalerStats {
    pub median: Vec<f64>,
    pub iqr: Vec<f64>,
}

/// Quantile `q ∈ [0, 1]` of sorted data, linear interpolation.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

impl RobustScalerStats {
    /// Fits on the given (training) rows only.
    pub fn fit(x: ArrayView2<f64>) -> Self {
        assert!(x.nrows() > 0, "cannot fit a scaler on zero rows");
        let mut median = Vec::with_capacity(x.ncols());
        let mut iqr = Vec::with_capacity(x.ncols());
        for col in x.axis_iter(Axis(1)) {
            let mut v: Vec<f64> = col.to_vec();
            v.sort_by(f64::total_cmp);
            median.push(quantile_sorted(&v, 0.5));
            iqr.push(quantile_sorted(&v, 0.75) - quantile_sorted(&v, 0.25));
        }
        RobustScalerStats { median, iqr }
    }

    /// Identity scaler of the given width.
    pub fn identity(width: usize) -> Self {
        RobustScalerStats {
            median: vec![0.0; width],
            iqr: vec![1.0; width],
        }
    }

    pub fn width(&self) -> usize {
        self.median.len()
    }

    pub fn scale_value(&self, j: usize, v: f64) -> f64 {
        let centred = v - self.median[j];
        if self.iqr[j] > 0.0 {
            centred / self.iqr[j]
        } else {
            centred
        }
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter().enumerate().map(|(j, &v)| self.scale_value(j, v)).collect()
    }

    pub fn transform(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let mut out = x.to_owned();
        for mut row in out.rows_mut() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.scale_value(j, *v);
            }
        }
        out
    }

    /// Keeps the statistics of the given columns.
    pub fn restrict(&self, columns: &[usize]) -> Self {
        RobustScalerStats {
            median: columns.iter().map(|&j| self.median[j]).collect(),
            iqr: columns.iter().map(|&j| self.iqr[j]).collect(),
        }
    }
}

/// Fits on `train` and applies the same statistics to both sets.
pub fn robust_scale(train: ArrayView2<f64>, test: ArrayView2<f64>) -> (Array2<f64>, Array2<f64>, RobustScalerStats) {
    let stats = RobustScalerStats::fit(train);
    (stats.transform(train), stats.transform(test), stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn one_to_five() {
        let train = array![[1.0], [2.0], [3.0], [4.0], [5.0]];
        let (s, _, stats) = robust_scale(train.view(), train.view());
        assert_eq!(stats.median, vec![3.0]);
        assert_eq!(stats.iqr, vec![2.0]);
        assert_eq!(s.column(0).to_vec(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn constant_feature_is_centred() {
        let train = array![[7.0, 1.0], [7.0, 2.0], [7.0, 3.0]];
        let (s, _, _) = robust_scale(train.view(), train.view());
        assert!(s.column(0).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn test_rows_use_train_statistics() {
        let train = array![[1.0], [2.0], [3.0], [4.0], [5.0]];
        let test = array![[100.0], [101.0]];
        let (_, t, _) = robust_scale(train.view(), test.view());
        assert_eq!(t.column(0).to_vec(), vec![48.5, 49.0]);
    }

    #[test]
    fn quantiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&v, 0.5), 2.5);
        assert_eq!(quantile_sorted(&v, 0.25), 1.75);
        assert_eq!(quantile_sorted(&v, 0.75), 3.25);
        assert_eq!(quantile_sorted(&[9.0], 0.3), 9.0);
    }
}
