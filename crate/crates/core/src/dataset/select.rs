//! Univariate selection by the linear-regression F statistic.

use ndarray::{ArrayView2, Axis};

/// `F = r² / (1 − r²) · (n − 2)` per column. Constant columns score 0.
pub fn f_statistics(x: ArrayView2<f64>, y: &[f64]) -> Vec<f64> {
    let n = y.len();
    assert_eq!(x.nrows(), n);
    let y_mean = y.iter().sum::<f64>() / n as f64;
    let syy: f64 = y.iter().map(|v| (v - y_mean) * (v - y_mean)).sum();
    x.axis_iter(Axis(1))
        .map(|col| {
            let x_mean = col.sum() / n as f64;
            let (mut sxy, mut sxx) = (0.0, 0.0);
            for (xv, yv) in col.iter().zip(y) {
                sxy += (xv - x_mean) * (yv - y_mean);
                sxx += (xv - x_mean) * (xv - x_mean);
            }
            if sxx == 0.0 || syy == 0.0 {
                return 0.0;
            }
            let r2 = (sxy * sxy / (sxx * syy)).min(1.0);
            if r2 == 1.0 {
                f64::INFINITY
            } else {
                r2 / (1.0 - r2) * (n as f64 - 2.0)
            }
        })
        .collect()
}

/// Indices of the `k` best columns, ascending. Ties go to the earlier column.
pub fn select_k_best(x: ArrayView2<f64>, y: &[f64], k: usize) -> Vec<usize> {
    assert!(k <= x.ncols(), "k exceeds feature count");
    let f = f_statistics(x, y);
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&a, &b| f[b].total_cmp(&f[a]).then(a.cmp(&b)));
    let mut chosen = order[..k].to_vec();
    chosen.sort_unstable();
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use rand::Rng;

    fn oracle_f(x: &[f64], y: &[f64]) -> f64 {
        // slope fit: F = explained / (residual / (n - 2))
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let b = x.iter().zip(y).map(|(a, c)| (a - mx) * (c - my)).sum::<f64>()
            / x.iter().map(|a| (a - mx).powi(2)).sum::<f64>();
        let fit: Vec<f64> = x.iter().map(|a| my + b * (a - mx)).collect();
        let ssr: f64 = fit.iter().map(|f| (f - my).powi(2)).sum();
        let sse: f64 = fit.iter().zip(y).map(|(f, c)| (c - f).powi(2)).sum();
        ssr / (sse / (n - 2.0))
    }

    #[test]
    fn copied_feature_ranks_first() {
        let mut rng = crate::rng::stream_rng(3, 0);
        let n = 80;
        let mut x = Array2::zeros((n, 5));
        let mut y = vec![0.0; n];
        for i in 0..n {
            for j in 0..5 {
                x[[i, j]] = rng.gen::<f64>();
            }
            y[i] = x[[i, 3]] + 0.05 * rng.gen::<f64>();
        }
        let f = f_statistics(x.view(), &y);
        for j in 0..5 {
            let col = x.column(j).to_vec();
            let o = oracle_f(&col, &y);
            assert!((f[j] - o).abs() <= 1e-9 * o.max(1.0), "{j}: {} vs {o}", f[j]);
        }
        assert_eq!(select_k_best(x.view(), &y, 1), vec![3]);
        assert_eq!(select_k_best(x.view(), &y, 5), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn ties_prefer_schema_order() {
        let x = Array2::from_shape_vec((4, 3), vec![1.0, 1.0, 0.0, 2.0, 2.0, 0.0, 3.0, 3.0, 0.0, 5.0, 5.0, 0.0]).unwrap();
        let y = [1.0, 2.5, 2.9, 5.2];
        assert_eq!(select_k_best(x.view(), &y, 1), vec![0]);
        assert_eq!(f_statistics(x.view(), &y)[2], 0.0);
    }
}
