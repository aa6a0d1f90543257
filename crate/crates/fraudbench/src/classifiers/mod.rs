//! The five fraud classifiers behind one train/predict surface.
//!
//! LOG and SVC share the proximal-gradient solver in [`linear`]; LOG, SVC,
//! and KNN see z-scored inputs (statistics fitted on the training sample),
//! while RF and GNB consume raw features. Every model emits a score in
//! [0, 1] and a label thresholded at 0.5, and serializes to versioned JSON
//! that reloads to an identical model.

pub mod forest;
pub mod gnb;
pub mod knn;
pub mod linear;
mod standardize;

pub use linear::Penalty;
pub use standardize::Standardizer;

use crate::data::{Label, Transaction, INPUT_DIM};
use crate::error::{Error, Result};
use crate::sampling::Sample;
use serde::{Deserialize, Serialize};
use std::fmt;

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Log,
    Svc,
    Rf,
    Gnb,
    Knn,
}

impl ClassifierKind {
    /// GNB and KNN ride along as control models in reports.
    pub fn is_control(self) -> bool {
        matches!(self, ClassifierKind::Gnb | ClassifierKind::Knn)
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::Log => "LOG",
            ClassifierKind::Svc => "SVC",
            ClassifierKind::Rf => "RF",
            ClassifierKind::Gnb => "GNB",
            ClassifierKind::Knn => "KNN",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Hyper-parameters for one model. The `seed` on `Rf` drives its bootstrap
/// draws; the other kinds train deterministically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ClassifierSpec {
    Log {
        penalty: Penalty,
        c_value: f64,
    },
    Svc {
        penalty: Penalty,
        c_value: f64,
    },
    Rf {
        trees: usize,
        #[serde(default)]
        seed: u64,
    },
    Gnb,
    Knn {
        k: usize,
    },
}

impl ClassifierSpec {
    pub fn log(penalty: Penalty, c_value: f64) -> ClassifierSpec {
        ClassifierSpec::Log { penalty, c_value }
    }

    pub fn svc(penalty: Penalty, c_value: f64) -> ClassifierSpec {
        ClassifierSpec::Svc { penalty, c_value }
    }

    pub fn rf(trees: usize) -> ClassifierSpec {
        ClassifierSpec::Rf { trees, seed: 0 }
    }

    pub fn knn(k: usize) -> ClassifierSpec {
        ClassifierSpec::Knn { k }
    }

    pub fn kind(&self) -> ClassifierKind {
        match self {
            ClassifierSpec::Log { .. } => ClassifierKind::Log,
            ClassifierSpec::Svc { .. } => ClassifierKind::Svc,
            ClassifierSpec::Rf { .. } => ClassifierKind::Rf,
            ClassifierSpec::Gnb => ClassifierKind::Gnb,
            ClassifierSpec::Knn { .. } => ClassifierKind::Knn,
        }
    }

    /// Sets the training seed where one applies.
    pub fn with_seed(self, seed: u64) -> ClassifierSpec {
        match self {
            ClassifierSpec::Rf { trees, .. } => ClassifierSpec::Rf { trees, seed },
            other => other,
        }
    }

    /// Short display label, free of commas so it can sit in CSV cells:
    /// `LOG(l1/0.5)`, `RF(80)`, `KNN(10)`, `GNB`.
    pub fn label(&self) -> String {
        match self {
            ClassifierSpec::Log { penalty, c_value } => format!("LOG({penalty}/{c_value})"),
            ClassifierSpec::Svc { penalty, c_value } => format!("SVC({penalty}/{c_value})"),
            ClassifierSpec::Rf { trees, .. } => format!("RF({trees})"),
            ClassifierSpec::Gnb => "GNB".to_string(),
            ClassifierSpec::Knn { k } => format!("KNN({k})"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ClassifierSpec::Log { c_value, .. } | ClassifierSpec::Svc { c_value, .. } => {
                if !(*c_value > 0.0) || !c_value.is_finite() {
                    return Err(Error::Parameter(format!(
                        "c_value must be positive, got {c_value}"
                    )));
                }
            }
            ClassifierSpec::Rf { trees, .. } => {
                if *trees == 0 {
                    return Err(Error::Parameter("trees must be >= 1".into()));
                }
            }
            ClassifierSpec::Knn { k } => {
                if *k == 0 {
                    return Err(Error::Parameter("k must be >= 1".into()));
                }
            }
            ClassifierSpec::Gnb => {}
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    pub score: f64,
    pub label: Label,
}

impl Prediction {
    pub fn from_score(score: f64) -> Prediction {
        Prediction {
            score,
            label: Label::from_fraud_flag(score >= 0.5),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearClassifier {
    penalty: Penalty,
    c_value: f64,
    converged: bool,
    standardizer: Standardizer,
    weights: Vec<f64>,
    bias: f64,
}

impl LinearClassifier {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestClassifier {
    trees: usize,
    seed: u64,
    model: forest::ForestModel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnbClassifier {
    model: gnb::GnbModel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnnClassifier {
    standardizer: Standardizer,
    model: knn::KnnModel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TrainedModel {
    Log(LinearClassifier),
    Svc(LinearClassifier),
    Rf(ForestClassifier),
    Gnb(GnbClassifier),
    Knn(KnnClassifier),
}

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    format_version: u32,
    model: TrainedModel,
}

/// Flattens sample records into a row-major input matrix plus labels.
fn design_matrix(records: &[Transaction]) -> (Vec<f64>, Vec<bool>) {
    let mut xs = Vec::with_capacity(records.len() * INPUT_DIM);
    let mut ys = Vec::with_capacity(records.len());
    for t in records {
        xs.extend_from_slice(&t.model_input());
        ys.push(t.is_fraud());
    }
    (xs, ys)
}

/// Trains the model a spec describes on a sample that must contain both
/// classes.
pub fn train(spec: &ClassifierSpec, sample: &Sample) -> Result<TrainedModel> {
    spec.validate()?;
    let records = sample.records();
    if records.is_empty() {
        return Err(Error::Training("sample is empty".into()));
    }
    let fraud = sample.fraud_count();
    if fraud == 0 || fraud == records.len() {
        return Err(Error::Training(
            "sample contains a single class only".into(),
        ));
    }
    let (xs, ys) = design_matrix(records);

    let model = match spec {
        ClassifierSpec::Log { penalty, c_value } | ClassifierSpec::Svc { penalty, c_value } => {
            let loss = if matches!(spec, ClassifierSpec::Log { .. }) {
                linear::LinearLoss::Logistic
            } else {
                linear::LinearLoss::SquaredHinge
            };
            let standardizer = Standardizer::fit(&xs, INPUT_DIM);
            let mut std_xs = xs;
            standardizer.transform_matrix(&mut std_xs);
            let out = linear::fit(loss, *penalty, *c_value, &std_xs, INPUT_DIM, &ys);
            if !out.converged {
                eprintln!(
                    "warning: {} solver stopped at the iteration cap without converging",
                    spec.label()
                );
            }
            let classifier = LinearClassifier {
                penalty: *penalty,
                c_value: *c_value,
                converged: out.converged,
                standardizer,
                weights: out.weights,
                bias: out.bias,
            };
            if matches!(spec, ClassifierSpec::Log { .. }) {
                TrainedModel::Log(classifier)
            } else {
                TrainedModel::Svc(classifier)
            }
        }
        ClassifierSpec::Rf { trees, seed } => TrainedModel::Rf(ForestClassifier {
            trees: *trees,
            seed: *seed,
            model: forest::fit(&xs, INPUT_DIM, &ys, *trees, *seed),
        }),
        ClassifierSpec::Gnb => TrainedModel::Gnb(GnbClassifier {
            model: gnb::fit(&xs, INPUT_DIM, &ys),
        }),
        ClassifierSpec::Knn { k } => {
            if *k > records.len() {
                return Err(Error::Parameter(format!(
                    "k = {k} exceeds the sample size {}",
                    records.len()
                )));
            }
            let standardizer = Standardizer::fit(&xs, INPUT_DIM);
            let mut std_xs = xs;
            standardizer.transform_matrix(&mut std_xs);
            TrainedModel::Knn(KnnClassifier {
                standardizer,
                model: knn::fit(std_xs, INPUT_DIM, ys, *k),
            })
        }
    };
    Ok(model)
}

fn validate_record(t: &Transaction) -> Result<()> {
    if t.features().iter().any(|v| !v.is_finite()) || !t.amount().as_units().is_finite() {
        return Err(Error::Input("record has a non-finite feature".into()));
    }
    Ok(())
}

impl TrainedModel {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            TrainedModel::Log(_) => ClassifierKind::Log,
            TrainedModel::Svc(_) => ClassifierKind::Svc,
            TrainedModel::Rf(_) => ClassifierKind::Rf,
            TrainedModel::Gnb(_) => ClassifierKind::Gnb,
            TrainedModel::Knn(_) => ClassifierKind::Knn,
        }
    }

    /// False only when a linear solver stopped at its iteration cap.
    pub fn converged(&self) -> bool {
        match self {
            TrainedModel::Log(m) | TrainedModel::Svc(m) => m.converged,
            _ => true,
        }
    }

    pub fn predict(&self, record: &Transaction) -> Result<Prediction> {
        validate_record(record)?;
        let x = record.model_input();
        let score = match self {
            TrainedModel::Log(m) | TrainedModel::Svc(m) => {
                let mut row = x;
                m.standardizer.transform_row(&mut row);
                linear::sigmoid_score(&row, &m.weights, m.bias)
            }
            TrainedModel::Rf(m) => m.model.score(&x),
            TrainedModel::Gnb(m) => m.model.score(&x),
            TrainedModel::Knn(m) => {
                let mut row = x;
                m.standardizer.transform_row(&mut row);
                m.model.score(&row)
            }
        };
        Ok(Prediction::from_score(score))
    }

    /// Elementwise prediction; the first failure is reported with its
    /// record index.
    pub fn predict_batch(&self, records: &[Transaction]) -> Result<Vec<Prediction>> {
        records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                self.predict(r)
                    .map_err(|e| Error::Input(format!("record {i}: {e}")))
            })
            .collect()
    }

    /// Versioned JSON; `from_json` restores an identical model.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&ModelDocument {
            format_version: MODEL_FORMAT_VERSION,
            model: self.clone(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<TrainedModel> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        if doc.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Config(format!(
                "unsupported model format version {}, expected {}",
                doc.format_version, MODEL_FORMAT_VERSION
            )));
        }
        Ok(doc.model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Dataset;
    use crate::sampling::{build_sample, SampleSpec};

    fn training_sample(seed: u64) -> Sample {
        let pool = Dataset::synthetic(3_000, 0.02, seed).unwrap();
        build_sample(&pool, &SampleSpec::undersample(0.3).with_seed(seed)).unwrap()
    }

    fn all_specs() -> Vec<ClassifierSpec> {
        vec![
            ClassifierSpec::log(Penalty::L1, 0.5),
            ClassifierSpec::svc(Penalty::L1, 0.5),
            ClassifierSpec::rf(20).with_seed(3),
            ClassifierSpec::Gnb,
            ClassifierSpec::knn(5),
        ]
    }

    #[test]
    fn spec_labels_are_stable_and_comma_free() {
        let labels: Vec<String> = all_specs().iter().map(|s| s.label()).collect();
        assert_eq!(labels[0], "LOG(l1/0.5)");
        assert_eq!(labels[2], "RF(20)");
        assert_eq!(labels[4], "KNN(5)");
        assert!(labels.iter().all(|l| !l.contains(',')));
    }

    #[test]
    fn every_kind_trains_and_scores_in_range() {
        let sample = training_sample(1);
        let probe = Dataset::synthetic(500, 0.02, 2).unwrap();
        for spec in all_specs() {
            let model = train(&spec, &sample).unwrap();
            assert_eq!(model.kind(), spec.kind());
            assert!(model.converged(), "{} did not converge", spec.label());
            for p in model.predict_batch(probe.records()).unwrap() {
                assert!((0.0..=1.0).contains(&p.score));
                assert_eq!(p.label.is_fraud(), p.score >= 0.5);
            }
        }
    }

    #[test]
    fn rebalanced_models_separate_the_synthetic_classes() {
        // Separability check: a held-out split must score far above chance.
        let pool = Dataset::synthetic(1_000, 0.5, 7).unwrap();
        let half = 500;
        let train_sample = Sample::from_parts(
            pool.records()[..half].to_vec(),
            vec![false; half],
            Vec::new(),
        );
        let model = train(&ClassifierSpec::log(Penalty::L2, 1.0), &train_sample).unwrap();
        let held_out = &pool.records()[half..];
        let mut correct = 0;
        for t in held_out {
            let p = model.predict(t).unwrap();
            if p.label == t.label() {
                correct += 1;
            }
        }
        let accuracy = correct as f64 / held_out.len() as f64;
        assert!(accuracy > 0.5, "accuracy {accuracy}");
    }

    #[test]
    fn single_class_sample_is_a_training_error() {
        let pool = Dataset::synthetic(200, 0.1, 5).unwrap();
        let legit_only: Vec<Transaction> = pool
            .records()
            .iter()
            .filter(|t| !t.is_fraud())
            .cloned()
            .collect();
        let n = legit_only.len();
        let sample = Sample::from_parts(legit_only, vec![false; n], Vec::new());
        for spec in all_specs() {
            let err = train(&spec, &sample).unwrap_err();
            assert!(matches!(err, Error::Training(_)), "{}: {err}", spec.label());
        }
    }

    #[test]
    fn batch_prediction_equals_single_calls() {
        let sample = training_sample(11);
        let probe = Dataset::synthetic(1_000, 0.05, 13).unwrap();
        let model = train(&ClassifierSpec::rf(10).with_seed(17), &sample).unwrap();
        let batch = model.predict_batch(probe.records()).unwrap();
        for (t, p) in probe.records().iter().zip(&batch) {
            assert_eq!(model.predict(t).unwrap(), *p);
        }
    }

    #[test]
    fn knn_k_larger_than_sample_is_rejected() {
        let sample = training_sample(19);
        let spec = ClassifierSpec::knn(sample.len() + 1);
        assert!(matches!(
            train(&spec, &sample),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn models_round_trip_through_versioned_json() {
        let sample = training_sample(23);
        for spec in all_specs() {
            let model = train(&spec, &sample).unwrap();
            let text = model.to_json().unwrap();
            assert!(text.contains("\"format_version\":1"));
            let restored = TrainedModel::from_json(&text).unwrap();
            assert_eq!(model, restored, "{} did not round-trip", spec.label());
        }
    }

    #[test]
    fn wrong_model_version_is_rejected() {
        let sample = training_sample(29);
        let model = train(&ClassifierSpec::Gnb, &sample).unwrap();
        let text = model
            .to_json()
            .unwrap()
            .replace("\"format_version\":1", "\"format_version\":9");
        assert!(matches!(
            TrainedModel::from_json(&text),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn spec_json_round_trip_rejects_unknown_fields() {
        let spec = ClassifierSpec::log(Penalty::L1, 0.5);
        let text = serde_json::to_string(&spec).unwrap();
        let back: ClassifierSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(spec, back);
        let bad = r#"{"kind":"log","penalty":"l1","c_value":0.5,"bogus":1}"#;
        assert!(serde_json::from_str::<ClassifierSpec>(bad).is_err());
    }
}
