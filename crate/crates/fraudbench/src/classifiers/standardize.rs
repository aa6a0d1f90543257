//! Z-score standardization fitted on training data.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    mean: Vec<f64>,
    std: Vec<f64>,
}

impl Standardizer {
    /// Fits per-column population statistics on a row-major matrix. A
    /// constant column keeps scale 1, so it standardizes to exactly zero.
    pub fn fit(rows: &[f64], n_features: usize) -> Standardizer {
        assert!(n_features > 0 && rows.len() % n_features == 0);
        let n = rows.len() / n_features;
        assert!(n > 0, "cannot fit a standardizer on zero rows");

        let mut mean = vec![0.0; n_features];
        for row in rows.chunks_exact(n_features) {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in mean.iter_mut() {
            *m /= n as f64;
        }

        let mut var = vec![0.0; n_features];
        for row in rows.chunks_exact(n_features) {
            for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
                let d = v - m;
                *s += d * d;
            }
        }
        let std = var
            .into_iter()
            .map(|s| {
                let sd = (s / n as f64).sqrt();
                if sd > 1e-12 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Standardizer { mean, std }
    }

    pub fn n_features(&self) -> usize {
        self.mean.len()
    }

    pub fn transform_row(&self, row: &mut [f64]) {
        debug_assert_eq!(row.len(), self.mean.len());
        for ((v, m), s) in row.iter_mut().zip(&self.mean).zip(&self.std) {
            *v = (*v - m) / s;
        }
    }

    pub fn transform_matrix(&self, rows: &mut [f64]) {
        for row in rows.chunks_exact_mut(self.mean.len()) {
            self.transform_row(row);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standardized_columns_have_zero_mean_unit_variance() {
        let rows = vec![1.0, 10.0, 2.0, 20.0, 3.0, 60.0, 4.0, 30.0];
        let s = Standardizer::fit(&rows, 2);
        let mut t = rows.clone();
        s.transform_matrix(&mut t);
        for col in 0..2 {
            let vals: Vec<f64> = t.chunks_exact(2).map(|r| r[col]).collect();
            let mean: f64 = vals.iter().sum::<f64>() / vals.len() as f64;
            let var: f64 = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                / vals.len() as f64;
            assert!(mean.abs() < 1e-12);
            assert!((var - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_column_standardizes_to_zero() {
        let rows = vec![5.0, 1.0, 5.0, 2.0, 5.0, 3.0];
        let s = Standardizer::fit(&rows, 2);
        let mut t = rows.clone();
        s.transform_matrix(&mut t);
        assert!(t.chunks_exact(2).all(|r| r[0] == 0.0));
    }
}
