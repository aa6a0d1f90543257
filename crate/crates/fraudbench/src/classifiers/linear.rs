//! Proximal-gradient solver shared by the two linear classifiers.
//!
//! Minimizes `mean_loss(w, b) + lambda * P(w)` where the loss is logistic
//! (LOG) or squared hinge (SVC), `P` is the L1 norm or half the squared L2
//! norm, and `lambda = 1 / (c_value * n)` — i.e. the total objective is the
//! summed loss plus a penalty of strength `1 / c_value`. Backtracking line
//! search on the smooth part, soft-thresholding for L1, unpenalized bias.
//! The solver stops when the minimum-norm subgradient falls below a
//! relative tolerance of 1e-6, or flags non-convergence at 5000 iterations.

use serde::{Deserialize, Serialize};
use std::fmt;

pub const MAX_ITERATIONS: usize = 5_000;
pub const TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinearLoss {
    Logistic,
    SquaredHinge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Penalty {
    L1,
    L2,
}

impl fmt::Display for Penalty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Penalty::L1 => "l1",
            Penalty::L2 => "l2",
        })
    }
}

#[derive(Clone, Debug)]
pub struct FitOutcome {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Penalty strength for the mean-scaled objective.
pub fn lambda(c_value: f64, n_samples: usize) -> f64 {
    1.0 / (c_value * n_samples as f64)
}

fn margin(row: &[f64], weights: &[f64], bias: f64, fraud: bool) -> f64 {
    let z: f64 = row.iter().zip(weights).map(|(x, w)| x * w).sum::<f64>() + bias;
    if fraud {
        z
    } else {
        -z
    }
}

fn loss_value(loss: LinearLoss, z: f64) -> f64 {
    match loss {
        // ln(1 + e^-z), computed on the safe side of the exponent.
        LinearLoss::Logistic => {
            if z > 0.0 {
                (-z).exp().ln_1p()
            } else {
                -z + z.exp().ln_1p()
            }
        }
        LinearLoss::SquaredHinge => {
            let m = (1.0 - z).max(0.0);
            m * m
        }
    }
}

fn loss_derivative(loss: LinearLoss, z: f64) -> f64 {
    match loss {
        // d/dz ln(1 + e^-z) = -1 / (1 + e^z)
        LinearLoss::Logistic => {
            if z > 0.0 {
                let e = (-z).exp();
                -e / (1.0 + e)
            } else {
                -1.0 / (1.0 + z.exp())
            }
        }
        LinearLoss::SquaredHinge => -2.0 * (1.0 - z).max(0.0),
    }
}

/// Mean data loss over the sample — the smooth part of the objective.
pub fn smooth_loss(
    loss: LinearLoss,
    xs: &[f64],
    n_features: usize,
    ys: &[bool],
    weights: &[f64],
    bias: f64,
) -> f64 {
    let n = ys.len();
    let mut total = 0.0;
    for (row, &fraud) in xs.chunks_exact(n_features).zip(ys) {
        total += loss_value(loss, margin(row, weights, bias, fraud));
    }
    total / n as f64
}

/// Gradient of `smooth_loss` in `(weights, bias)`.
pub fn smooth_gradient(
    loss: LinearLoss,
    xs: &[f64],
    n_features: usize,
    ys: &[bool],
    weights: &[f64],
    bias: f64,
) -> (Vec<f64>, f64) {
    let n = ys.len() as f64;
    let mut grad_w = vec![0.0; n_features];
    let mut grad_b = 0.0;
    for (row, &fraud) in xs.chunks_exact(n_features).zip(ys) {
        let y = if fraud { 1.0 } else { -1.0 };
        let coef = loss_derivative(loss, margin(row, weights, bias, fraud)) * y / n;
        for (g, x) in grad_w.iter_mut().zip(row) {
            *g += coef * x;
        }
        grad_b += coef;
    }
    (grad_w, grad_b)
}

/// Norm of the minimum-norm subgradient of the full objective: exactly the
/// gradient for L2, and the distance to the subdifferential for L1 (a zero
/// weight is optimal while |grad| stays within lambda).
pub fn optimality_residual(
    loss: LinearLoss,
    penalty: Penalty,
    lambda: f64,
    xs: &[f64],
    n_features: usize,
    ys: &[bool],
    weights: &[f64],
    bias: f64,
) -> f64 {
    let (grad_w, grad_b) = smooth_gradient(loss, xs, n_features, ys, weights, bias);
    residual_from_gradient(penalty, lambda, &grad_w, grad_b, weights)
}

fn residual_from_gradient(
    penalty: Penalty,
    lambda: f64,
    grad_w: &[f64],
    grad_b: f64,
    weights: &[f64],
) -> f64 {
    let mut sum = grad_b * grad_b;
    for (&g, &w) in grad_w.iter().zip(weights) {
        let r = match penalty {
            Penalty::L2 => g + lambda * w,
            Penalty::L1 => {
                if w > 0.0 {
                    g + lambda
                } else if w < 0.0 {
                    g - lambda
                } else {
                    (g.abs() - lambda).max(0.0)
                }
            }
        };
        sum += r * r;
    }
    sum.sqrt()
}

fn prox(v: f64, t_lambda: f64, penalty: Penalty) -> f64 {
    match penalty {
        Penalty::L1 => {
            if v > t_lambda {
                v - t_lambda
            } else if v < -t_lambda {
                v + t_lambda
            } else {
                0.0
            }
        }
        Penalty::L2 => v / (1.0 + t_lambda),
    }
}

/// Fits weights and bias from zero initialization. `converged` is false
/// when the iteration cap was hit; the best iterate found is returned
/// either way.
pub fn fit(
    loss: LinearLoss,
    penalty: Penalty,
    c_value: f64,
    xs: &[f64],
    n_features: usize,
    ys: &[bool],
) -> FitOutcome {
    assert!(c_value > 0.0 && c_value.is_finite());
    assert_eq!(xs.len(), n_features * ys.len());
    let lam = lambda(c_value, ys.len());

    let mut weights = vec![0.0; n_features];
    let mut bias = 0.0;
    let mut step = 1.0;
    let mut converged = false;
    let mut iterations = 0;

    'outer: for iter in 0..MAX_ITERATIONS {
        iterations = iter;
        let (grad_w, grad_b) = smooth_gradient(loss, xs, n_features, ys, &weights, bias);
        let residual = residual_from_gradient(penalty, lam, &grad_w, grad_b, &weights);
        let scale = {
            let norm_sq: f64 =
                weights.iter().map(|w| w * w).sum::<f64>() + bias * bias;
            norm_sq.sqrt().max(1.0)
        };
        if residual <= TOLERANCE * scale {
            converged = true;
            break;
        }

        let f0 = smooth_loss(loss, xs, n_features, ys, &weights, bias);
        loop {
            let mut cand_w = Vec::with_capacity(n_features);
            for (&w, &g) in weights.iter().zip(&grad_w) {
                cand_w.push(prox(w - step * g, step * lam, penalty));
            }
            let cand_b = bias - step * grad_b;

            let mut delta_sq = 0.0;
            let mut grad_dot_delta = 0.0;
            for ((&cw, &w), &g) in cand_w.iter().zip(&weights).zip(&grad_w) {
                let d = cw - w;
                delta_sq += d * d;
                grad_dot_delta += g * d;
            }
            let db = cand_b - bias;
            delta_sq += db * db;
            grad_dot_delta += grad_b * db;

            let f_new = smooth_loss(loss, xs, n_features, ys, &cand_w, cand_b);
            if f_new <= f0 + grad_dot_delta + delta_sq / (2.0 * step) + 1e-12 {
                weights = cand_w;
                bias = cand_b;
                break;
            }
            step *= 0.5;
            if step < 1e-14 {
                // The quadratic model cannot be satisfied at any step;
                // further progress is numerical noise.
                break 'outer;
            }
        }
        step = (step * 1.25).min(1e6);
    }
    FitOutcome {
        weights,
        bias,
        converged,
        iterations,
    }
}

/// Probability-like score: the sigmoid of the signed margin.
pub fn sigmoid_score(row: &[f64], weights: &[f64], bias: f64) -> f64 {
    let z: f64 = row.iter().zip(weights).map(|(x, w)| x * w).sum::<f64>() + bias;
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}
