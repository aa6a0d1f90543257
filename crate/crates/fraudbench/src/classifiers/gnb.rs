//! Gaussian naive Bayes over the raw model inputs.
//!
//! Per-class, per-feature Gaussians with a variance floor of 1e-9 times
//! the largest overall feature variance; likelihoods combine in log space
//! and posteriors come out of a two-way softmax, so the two class scores
//! sum to one up to rounding.

use serde::{Deserialize, Serialize};

pub const VAR_SMOOTHING: f64 = 1e-9;

/// Class order everywhere: index 0 legit, index 1 fraud.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnbModel {
    log_priors: [f64; 2],
    means: [Vec<f64>; 2],
    variances: [Vec<f64>; 2],
}

/// Fits per-class Gaussians; both classes must be present.
pub fn fit(xs: &[f64], n_features: usize, ys: &[bool]) -> GnbModel {
    let n = ys.len();
    assert_eq!(xs.len(), n * n_features);
    let counts = [
        ys.iter().filter(|&&y| !y).count(),
        ys.iter().filter(|&&y| y).count(),
    ];
    assert!(counts[0] > 0 && counts[1] > 0, "both classes required");

    let mut means = [vec![0.0; n_features], vec![0.0; n_features]];
    for (row, &y) in xs.chunks_exact(n_features).zip(ys) {
        let c = y as usize;
        for (m, v) in means[c].iter_mut().zip(row) {
            *m += v;
        }
    }
    for c in 0..2 {
        for m in means[c].iter_mut() {
            *m /= counts[c] as f64;
        }
    }

    let mut variances = [vec![0.0; n_features], vec![0.0; n_features]];
    for (row, &y) in xs.chunks_exact(n_features).zip(ys) {
        let c = y as usize;
        for ((s, v), m) in variances[c].iter_mut().zip(row).zip(&means[c]) {
            let d = v - m;
            *s += d * d;
        }
    }
    for c in 0..2 {
        for s in variances[c].iter_mut() {
            *s /= counts[c] as f64;
        }
    }

    // Overall per-feature variance sets the smoothing scale.
    let mut overall_mean = vec![0.0; n_features];
    for row in xs.chunks_exact(n_features) {
        for (m, v) in overall_mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in overall_mean.iter_mut() {
        *m /= n as f64;
    }
    let mut max_var: f64 = 0.0;
    for j in 0..n_features {
        let mut s = 0.0;
        for row in xs.chunks_exact(n_features) {
            let d = row[j] - overall_mean[j];
            s += d * d;
        }
        max_var = max_var.max(s / n as f64);
    }
    let epsilon = (VAR_SMOOTHING * max_var).max(f64::MIN_POSITIVE);
    for c in 0..2 {
        for s in variances[c].iter_mut() {
            *s += epsilon;
        }
    }

    let log_priors = [
        (counts[0] as f64 / n as f64).ln(),
        (counts[1] as f64 / n as f64).ln(),
    ];
    GnbModel {
        log_priors,
        means,
        variances,
    }
}

impl GnbModel {
    pub fn n_features(&self) -> usize {
        self.means[0].len()
    }

    fn log_joint(&self, x: &[f64]) -> [f64; 2] {
        let mut out = [0.0; 2];
        for c in 0..2 {
            let mut acc = self.log_priors[c];
            for ((&v, m), var) in x.iter().zip(&self.means[c]).zip(&self.variances[c]) {
                let d = v - m;
                acc += -0.5 * (std::f64::consts::TAU * var).ln() - d * d / (2.0 * var);
            }
            out[c] = acc;
        }
        out
    }

    /// `[P(legit | x), P(fraud | x)]`; the pair sums to one up to rounding.
    pub fn posteriors(&self, x: &[f64]) -> [f64; 2] {
        let joint = self.log_joint(x);
        let m = joint[0].max(joint[1]);
        let e0 = (joint[0] - m).exp();
        let e1 = (joint[1] - m).exp();
        let z = e0 + e1;
        [e0 / z, e1 / z]
    }

    /// Fraud posterior.
    pub fn score(&self, x: &[f64]) -> f64 {
        self.posteriors(x)[1]
    }
}

/// Normal density; at `x == mean` this is `1 / (sqrt(2 pi) * std)`.
pub fn gaussian_pdf(x: f64, mean: f64, std: f64) -> f64 {
    let d = (x - mean) / std;
    (-0.5 * d * d).exp() / ((std::f64::consts::TAU).sqrt() * std)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn separated_problem(sigma_gap: f64, n: usize, seed: u64) -> (Vec<f64>, Vec<bool>) {
        let mut rng = seeded_rng(seed);
        let d = 3;
        let mut xs = Vec::with_capacity(n * d);
        let mut ys = Vec::with_capacity(n);
        for i in 0..n {
            let fraud = i % 2 == 0;
            for _ in 0..d {
                let center = if fraud { sigma_gap } else { 0.0 };
                let noise: f64 = rng.sample(StandardNormal);
                xs.push(center + noise);
            }
            ys.push(fraud);
        }
        (xs, ys)
    }

    #[test]
    fn posteriors_sum_to_one() {
        let (xs, ys) = separated_problem(2.0, 200, 5);
        let model = fit(&xs, 3, &ys);
        let mut rng = seeded_rng(6);
        for _ in 0..200 {
            let x = [
                rng.gen_range(-4.0..6.0),
                rng.gen_range(-4.0..6.0),
                rng.gen_range(-4.0..6.0),
            ];
            let p = model.posteriors(&x);
            assert!((p[0] + p[1] - 1.0).abs() < 1e-12);
            assert!(p[1] >= 0.0 && p[1] <= 1.0);
        }
    }

    #[test]
    fn well_separated_classes_classify_almost_perfectly() {
        let (xs, ys) = separated_problem(5.0, 400, 7);
        let model = fit(&xs, 3, &ys);
        let (txs, tys) = separated_problem(5.0, 400, 8);
        let mut correct = 0;
        for (row, &y) in txs.chunks_exact(3).zip(&tys) {
            if (model.score(row) >= 0.5) == y {
                correct += 1;
            }
        }
        assert!(correct as f64 / tys.len() as f64 >= 0.99);
    }

    #[test]
    fn record_at_one_class_mean_scores_near_one() {
        let (xs, ys) = separated_problem(8.0, 400, 9);
        let model = fit(&xs, 3, &ys);
        let fraud_mean: Vec<f64> = model.means[1].clone();
        let score = model.score(&fraud_mean);
        assert!((score - 1.0).abs() < 1e-6, "score {score}");
    }

    #[test]
    fn density_peak_matches_closed_form() {
        for std in [0.5, 1.0, 3.0] {
            let expected = 1.0 / ((std::f64::consts::TAU).sqrt() * std);
            assert!((gaussian_pdf(2.0, 2.0, std) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_feature_survives_via_smoothing() {
        // One dead column: without smoothing its variance would be zero.
        let xs = vec![
            1.0, 5.0, //
            2.0, 5.0, //
            -1.0, 5.0, //
            -2.0, 5.0,
        ];
        let ys = vec![true, true, false, false];
        let model = fit(&xs, 2, &ys);
        let s = model.score(&[1.5, 5.0]);
        assert!(s.is_finite() && s > 0.5);
    }
}
