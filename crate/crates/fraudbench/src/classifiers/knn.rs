//! K-nearest-neighbour voting over the standardized training sample.

use serde::{Deserialize, Serialize};

/// Stores the (already standardized) training matrix verbatim; scoring is
/// a full distance scan with ties broken toward the lower training index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    rows: Vec<f64>,
    n_features: usize,
    labels: Vec<bool>,
    k: usize,
}

pub fn fit(rows: Vec<f64>, n_features: usize, labels: Vec<bool>, k: usize) -> KnnModel {
    assert!(k >= 1 && k <= labels.len());
    assert_eq!(rows.len(), labels.len() * n_features);
    KnnModel {
        rows,
        n_features,
        labels,
        k,
    }
}

impl KnnModel {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// Fraction of fraud among the k nearest training rows — always a
    /// multiple of 1/k.
    pub fn score(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n_features);
        let mut order: Vec<(f64, usize)> = self
            .rows
            .chunks_exact(self.n_features)
            .enumerate()
            .map(|(i, row)| {
                let d: f64 = row
                    .iter()
                    .zip(x)
                    .map(|(a, b)| {
                        let d = a - b;
                        d * d
                    })
                    .sum();
                (d, i)
            })
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let fraud_votes = order[..self.k]
            .iter()
            .filter(|&&(_, i)| self.labels[i])
            .count();
        fraud_votes as f64 / self.k as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scores_are_multiples_of_one_over_k() {
        let rows = vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let labels = vec![true, true, false, true, false, false, false];
        let model = fit(rows, 1, labels, 3);
        for x in [-1.0, 0.5, 2.5, 10.0] {
            let s = model.score(&[x]);
            let scaled = s * 3.0;
            assert!((scaled - scaled.round()).abs() < 1e-12, "score {s}");
        }
    }

    #[test]
    fn k_equals_one_memorizes_training_points() {
        let rows = vec![0.0, 10.0, 20.0];
        let labels = vec![true, false, true];
        let model = fit(rows, 1, labels, 1);
        assert_eq!(model.score(&[0.1]), 1.0);
        assert_eq!(model.score(&[9.0]), 0.0);
        assert_eq!(model.score(&[19.0]), 1.0);
    }

    #[test]
    fn distance_ties_break_toward_lower_index() {
        // Two training rows equidistant from the query; k = 1 must pick
        // index 0 (fraud), not index 1.
        let rows = vec![-1.0, 1.0];
        let labels = vec![true, false];
        let model = fit(rows, 1, labels, 1);
        assert_eq!(model.score(&[0.0]), 1.0);
    }
}
