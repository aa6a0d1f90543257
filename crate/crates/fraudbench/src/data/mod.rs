//! Transaction records, dataset containers, and the sample/test partition.

mod io;
mod synthetic;

use crate::error::{Error, Result};
use crate::money::Money;
use crate::rng::seeded_rng;
use rand::seq::index;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Number of PCA feature columns (`V1..V28`).
pub const FEATURE_COUNT: usize = 28;

/// Model input width: the PCA features plus the raw amount.
pub const INPUT_DIM: usize = FEATURE_COUNT + 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Legit,
    Fraud,
}

impl Label {
    pub fn is_fraud(self) -> bool {
        matches!(self, Label::Fraud)
    }

    pub fn from_fraud_flag(fraud: bool) -> Label {
        if fraud {
            Label::Fraud
        } else {
            Label::Legit
        }
    }
}

/// One PCA-transformed card transaction. Construction validates that all
/// numeric fields are finite and the amount non-negative, so downstream
/// code can rely on clean inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transaction {
    features: [f64; FEATURE_COUNT],
    time: f64,
    amount: Money,
    label: Label,
}

impl Transaction {
    pub fn new(
        features: [f64; FEATURE_COUNT],
        time: f64,
        amount: Money,
        label: Label,
    ) -> Result<Transaction> {
        if let Some(i) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parameter(format!("feature V{} is not finite", i + 1)));
        }
        if !time.is_finite() {
            return Err(Error::Parameter("time is not finite".into()));
        }
        if amount.micros() < 0 {
            return Err(Error::Parameter("amount must be non-negative".into()));
        }
        Ok(Transaction {
            features,
            time,
            amount,
            label,
        })
    }

    pub fn features(&self) -> &[f64; FEATURE_COUNT] {
        &self.features
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn amount(&self) -> Money {
        self.amount
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn is_fraud(&self) -> bool {
        self.label.is_fraud()
    }

    /// Model input: V1..V28 followed by the amount in currency units.
    pub fn model_input(&self) -> [f64; INPUT_DIM] {
        let mut x = [0.0; INPUT_DIM];
        x[..FEATURE_COUNT].copy_from_slice(&self.features);
        x[FEATURE_COUNT] = self.amount.as_units();
        x
    }
}

/// An ordered collection of transactions with a cached fraud tally.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    records: Vec<Transaction>,
    fraud_count: usize,
}

impl Dataset {
    pub fn new(records: Vec<Transaction>) -> Dataset {
        let fraud_count = records.iter().filter(|t| t.is_fraud()).count();
        Dataset {
            records,
            fraud_count,
        }
    }

    /// Loads a `Time,V1..V28,Amount,Class` CSV file.
    pub fn load(path: impl AsRef<Path>) -> Result<Dataset> {
        io::load(path.as_ref())
    }

    /// Writes the dataset back out in the same schema; a written file loads
    /// to an identical dataset.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        io::write(self, path.as_ref())
    }

    /// Generates a synthetic stand-in dataset with the given fraud share.
    pub fn synthetic(n: usize, fraud_rate: f64, seed: u64) -> Result<Dataset> {
        synthetic::generate(n, fraud_rate, seed)
    }

    pub fn records(&self) -> &[Transaction] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn fraud_count(&self) -> usize {
        self.fraud_count
    }

    pub fn fraud_rate(&self) -> f64 {
        if self.records.is_empty() {
            0.0
        } else {
            self.fraud_count as f64 / self.records.len() as f64
        }
    }

    /// Splits the dataset uniformly at random into a sampling pool holding
    /// `round(sample_fraction * len)` records and a testing pool with the
    /// rest. Original record order is preserved inside each pool. Errors if
    /// either pool ends up without fraud records.
    pub fn partition(&self, sample_fraction: f64, seed: u64) -> Result<Partition> {
        if !(sample_fraction > 0.0 && sample_fraction < 1.0) || !sample_fraction.is_finite() {
            return Err(Error::Parameter(format!(
                "sample_fraction must lie in (0, 1), got {sample_fraction}"
            )));
        }
        let n = self.records.len();
        let take = (sample_fraction * n as f64).round() as usize;
        if take == 0 || take >= n {
            return Err(Error::Parameter(format!(
                "sample_fraction {sample_fraction} leaves an empty pool for {n} records"
            )));
        }
        let mut rng = seeded_rng(seed);
        let mut chosen = index::sample(&mut rng, n, take).into_vec();
        chosen.sort_unstable();

        let mut sample_records = Vec::with_capacity(take);
        let mut test_records = Vec::with_capacity(n - take);
        let mut next = chosen.iter().copied().peekable();
        for (i, record) in self.records.iter().enumerate() {
            if next.peek() == Some(&i) {
                next.next();
                sample_records.push(record.clone());
            } else {
                test_records.push(record.clone());
            }
        }

        let sample_pool = Dataset::new(sample_records);
        let test_pool = Dataset::new(test_records);
        if sample_pool.fraud_count == 0 {
            return Err(Error::DegeneratePartition(
                "sample pool holds no fraud records".into(),
            ));
        }
        if test_pool.fraud_count == 0 {
            return Err(Error::DegeneratePartition(
                "test pool holds no fraud records".into(),
            ));
        }
        Ok(Partition {
            sample_pool,
            test_pool,
            seed,
        })
    }
}

/// Disjoint sample-construction and testing pools drawn from one dataset.
#[derive(Clone, Debug)]
pub struct Partition {
    pub sample_pool: Dataset,
    pub test_pool: Dataset,
    pub seed: u64,
}
