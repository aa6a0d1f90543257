//! Confusion-matrix bookkeeping, the eight derived rates, composite
//! precision/recall, F1, and the transaction-level fraud cost.
//!
//! Undefined ratios (zero denominators) stay `None` rather than collapsing
//! to zero, so aggregation can skip them explicitly. The cost function
//! works in integer ticks end to end: totals are exact, order-independent,
//! and exactly linear in the transaction amounts.

use crate::data::Label;
use crate::error::{Error, Result};
use crate::money::{Cost, Money};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fp: u64, tn: u64, fn_: u64) -> ConfusionCounts {
        ConfusionCounts { tp, fp, tn, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// Tallies predictions against ground truth; fraud is the positive class.
pub fn confusion(predicted: &[Label], truth: &[Label]) -> Result<ConfusionCounts> {
    if predicted.len() != truth.len() {
        return Err(Error::Input(format!(
            "prediction/truth length mismatch: {} vs {}",
            predicted.len(),
            truth.len()
        )));
    }
    if predicted.is_empty() {
        return Err(Error::Input("no records to score".into()));
    }
    let mut counts = ConfusionCounts::default();
    for (p, t) in predicted.iter().zip(truth.iter()) {
        match (p.is_fraud(), t.is_fraud()) {
            (true, true) => counts.tp += 1,
            (true, false) => counts.fp += 1,
            (false, false) => counts.tn += 1,
            (false, true) => counts.fn_ += 1,
        }
    }
    Ok(counts)
}

/// Derived rates as fractions in [0, 1]. A field is `None` when its
/// denominator is zero; composites are `None` when either constituent is.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub tpr: Option<f64>,
    pub fpr: Option<f64>,
    pub tnr: Option<f64>,
    pub fnr: Option<f64>,
    pub ppv: Option<f64>,
    pub npv: Option<f64>,
    pub fdr: Option<f64>,
    #[serde(rename = "for")]
    pub for_: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub accuracy: Option<f64>,
    pub f1: Option<f64>,
}

/// Metric names in reporting order.
pub const METRIC_NAMES: [&str; 12] = [
    "tpr",
    "fpr",
    "tnr",
    "fnr",
    "ppv",
    "npv",
    "fdr",
    "for",
    "precision",
    "recall",
    "accuracy",
    "f1",
];

impl MetricSet {
    /// `(name, value)` pairs in `METRIC_NAMES` order.
    pub fn as_pairs(&self) -> [(&'static str, Option<f64>); 12] {
        [
            ("tpr", self.tpr),
            ("fpr", self.fpr),
            ("tnr", self.tnr),
            ("fnr", self.fnr),
            ("ppv", self.ppv),
            ("npv", self.npv),
            ("fdr", self.fdr),
            ("for", self.for_),
            ("precision", self.precision),
            ("recall", self.recall),
            ("accuracy", self.accuracy),
            ("f1", self.f1),
        ]
    }
}

fn ratio(numerator: u64, denominator: u64) -> Option<f64> {
    (denominator > 0).then(|| numerator as f64 / denominator as f64)
}

/// Computes every rate a confusion matrix supports:
/// TPR = TP/(TP+FN), FPR = FP/(FP+TN), TNR = TN/(TN+FP), FNR = FN/(FN+TP),
/// PPV = TP/(TP+FP), NPV = TN/(TN+FN), FDR = FP/(FP+TP), FOR = FN/(FN+TN),
/// precision = (PPV+NPV)/2, recall = (TPR+TNR)/2, accuracy, and
/// F1 = 2TP/(2TP+FP+FN).
pub fn derive_metrics(counts: &ConfusionCounts) -> MetricSet {
    let ConfusionCounts { tp, fp, tn, fn_ } = *counts;
    let tpr = ratio(tp, tp + fn_);
    let fpr = ratio(fp, fp + tn);
    let tnr = ratio(tn, tn + fp);
    let fnr = ratio(fn_, fn_ + tp);
    let ppv = ratio(tp, tp + fp);
    let npv = ratio(tn, tn + fn_);
    let fdr = ratio(fp, fp + tp);
    let for_ = ratio(fn_, fn_ + tn);
    let precision = ppv.zip(npv).map(|(a, b)| (a + b) / 2.0);
    let recall = tpr.zip(tnr).map(|(a, b)| (a + b) / 2.0);
    let accuracy = ratio(tp + tn, counts.total());
    let f1 = ratio(2 * tp, 2 * tp + fp + fn_);
    MetricSet {
        tpr,
        fpr,
        tnr,
        fnr,
        ppv,
        npv,
        fdr,
        for_,
        precision,
        recall,
        accuracy,
        f1,
    }
}

/// Constants of the cost matrix. `f_m` is quantized to hundredths so its
/// products with amounts stay exact in integer arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CostModelRepr", into = "CostModelRepr")]
pub struct CostModel {
    c_f: Money,
    c_e: Money,
    c_l: Money,
    f_m_hundredths: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CostModelRepr {
    c_f: f64,
    c_e: f64,
    c_l: f64,
    f_m: f64,
}

impl TryFrom<CostModelRepr> for CostModel {
    type Error = Error;
    fn try_from(repr: CostModelRepr) -> Result<CostModel> {
        CostModel::new(repr.c_f, repr.c_e, repr.c_l, repr.f_m)
    }
}

impl From<CostModel> for CostModelRepr {
    fn from(cm: CostModel) -> CostModelRepr {
        CostModelRepr {
            c_f: cm.c_f.as_units(),
            c_e: cm.c_e.as_units(),
            c_l: cm.c_l.as_units(),
            f_m: cm.f_m(),
        }
    }
}

impl CostModel {
    /// Builds a model from currency-unit constants; all must be finite and
    /// non-negative, and `f_m` is rounded to hundredths.
    pub fn new(c_f: f64, c_e: f64, c_l: f64, f_m: f64) -> Result<CostModel> {
        for (name, v) in [("c_f", c_f), ("c_e", c_e), ("c_l", c_l), ("f_m", f_m)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Parameter(format!(
                    "cost constant {name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(CostModel {
            c_f: Money::from_units(c_f),
            c_e: Money::from_units(c_e),
            c_l: Money::from_units(c_l),
            f_m_hundredths: (f_m * 100.0).round() as i64,
        })
    }

    /// Cost of resolving a caught fraud.
    pub fn c_f(&self) -> Money {
        self.c_f
    }

    /// Cost of investigating a false alarm.
    pub fn c_e(&self) -> Money {
        self.c_e
    }

    /// Flat loss component of a missed fraud.
    pub fn c_l(&self) -> Money {
        self.c_l
    }

    /// Amount multiplier applied to missed fraud.
    pub fn f_m(&self) -> f64 {
        self.f_m_hundredths as f64 / 100.0
    }

    pub fn f_m_hundredths(&self) -> i64 {
        self.f_m_hundredths
    }
}

impl Default for CostModel {
    /// The benchmark constants: c_f = c_l = 10, c_e = 5, f_m = 2.40.
    fn default() -> CostModel {
        CostModel::new(10.0, 5.0, 10.0, 2.40).expect("constants are valid")
    }
}

/// Total fraud cost of a labelled prediction stream:
///
/// * a caught fraud (TP) saves its amount but costs `c_f` to resolve,
/// * a missed fraud (FN) costs `c_l` plus `f_m` times its amount,
/// * a false alarm (FP) costs `c_e`,
/// * a true negative is free.
///
/// Negative totals are net savings. The result is exact: integer ticks,
/// independent of record order, and linear in the amounts.
pub fn fraud_cost(
    predicted: &[Label],
    truth: &[Label],
    amounts: &[Money],
    model: &CostModel,
) -> Result<Cost> {
    if predicted.len() != truth.len() || predicted.len() != amounts.len() {
        return Err(Error::Input(format!(
            "prediction/truth/amount length mismatch: {} vs {} vs {}",
            predicted.len(),
            truth.len(),
            amounts.len()
        )));
    }
    if let Some(i) = amounts.iter().position(|a| a.micros() < 0) {
        return Err(Error::Input(format!("amount at index {i} is negative")));
    }
    let counts = confusion(predicted, truth)?;

    let mut ticks: i128 = 0;
    ticks += counts.tp as i128 * Cost::from_money(model.c_f).ticks();
    ticks += counts.fn_ as i128 * Cost::from_money(model.c_l).ticks();
    ticks += counts.fp as i128 * Cost::from_money(model.c_e).ticks();
    for ((p, t), amount) in predicted.iter().zip(truth).zip(amounts) {
        match (p.is_fraud(), t.is_fraud()) {
            (true, true) => ticks -= Cost::from_money(*amount).ticks(),
            (false, true) => ticks += model.f_m_hundredths as i128 * amount.micros() as i128,
            _ => {}
        }
    }
    Ok(Cost::from_ticks(ticks))
}
