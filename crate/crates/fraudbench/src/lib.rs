//! Cost-sensitive benchmarking for credit-card fraud detection on
//! imbalanced data.
//!
//! The pipeline mirrors a classical fraud study: load (or synthesize) a
//! heavily imbalanced transaction table, carve out a sampling pool, build a
//! rebalanced training sample (random draw, undersampling, or SMOTE), train
//! classical classifiers on it, and score the held-out remainder both with
//! confusion-matrix rates and with a transaction-level fraud cost in which a
//! caught fraud saves its amount and a missed fraud costs a multiple of it.
//! A genetic algorithm searches voting weights for an ensemble of the
//! strongest models, and a Monte Carlo harness repeats everything under
//! derived seeds so runs are reproducible byte for byte.

pub mod classifiers;
pub mod data;
pub mod ensemble;
pub mod error;
pub mod evaluation;
pub mod harness;
pub mod money;
pub mod rng;
pub mod sampling;

pub use error::{Error, Result};
