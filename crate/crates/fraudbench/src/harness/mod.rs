//! Monte Carlo experiment orchestration.
//!
//! A [`TestConfig`] names a dataset, a grid of sample specs, a grid of
//! classifier specs, and an iteration count. Each iteration re-partitions
//! the dataset under a seed derived from the master seed, rebuilds every
//! sample, trains every classifier on it, and scores the test pool plus
//! the sample's leftover records. Degenerate draws retry the iteration
//! under a fresh derived seed a bounded number of times, so finished runs
//! always hold `mc_iterations` rows per combination. Aggregation produces
//! a master log whose means are recomputable from the rows.

pub mod presets;
pub mod report;
pub mod search;

use crate::classifiers::{self, ClassifierSpec, TrainedModel};
use crate::data::{Dataset, Label, Transaction};
use crate::ensemble::{self, GaConfig};
use crate::error::{Error, Result};
use crate::evaluation::{confusion, derive_metrics, fraud_cost, ConfusionCounts, CostModel, MetricSet};
use crate::money::{Cost, Money};
use crate::rng::{derive_seed, SeedPurpose};
use crate::sampling::{build_sample, SampleMethod, SampleSpec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

/// How many fresh seeds an iteration may burn through after a degenerate
/// draw before the run aborts.
pub const MAX_RETRIES: u32 = 5;

pub const MASTER_FORMAT_VERSION: u32 = 1;

/// Where the transaction table comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetSource {
    /// A CSV file in the dataset schema.
    Path(PathBuf),
    /// A generated table; the generator seed derives from the master seed.
    Synthetic { records: usize, fraud_rate: f64 },
}

impl Default for DatasetSource {
    /// Desk-scale synthetic default so runs need no external file.
    fn default() -> DatasetSource {
        DatasetSource::Synthetic {
            records: 50_000,
            fraud_rate: 0.004,
        }
    }
}

/// Optional ensemble stage: member specs plus the weight-search knobs.
/// The GA seed field is ignored here — each iteration derives its own.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleSection {
    pub members: Vec<ClassifierSpec>,
    pub config: GaConfig,
}

impl Default for EnsembleSection {
    fn default() -> EnsembleSection {
        EnsembleSection {
            members: presets::tuned_member_specs(),
            config: GaConfig::default(),
        }
    }
}

fn default_sample_fraction() -> f64 {
    0.2
}

fn default_iterations() -> usize {
    10
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("fraudbench-out")
}

/// One full experiment description. JSON form rejects unknown keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestConfig {
    #[serde(default)]
    pub dataset: DatasetSource,
    /// Share of the dataset carved out as the sample-construction pool.
    #[serde(default = "default_sample_fraction")]
    pub sample_fraction: f64,
    pub samples: Vec<SampleSpec>,
    pub classifiers: Vec<ClassifierSpec>,
    #[serde(default = "default_iterations")]
    pub mc_iterations: usize,
    #[serde(default)]
    pub cost_model: CostModel,
    #[serde(default)]
    pub ga: Option<EnsembleSection>,
    #[serde(default)]
    pub master_seed: u64,
    /// Not serialized: where the report lands is no experiment parameter,
    /// and master.json stays identical across output locations.
    #[serde(default = "default_output_dir", skip_serializing)]
    pub output_dir: PathBuf,
}

impl Default for TestConfig {
    fn default() -> TestConfig {
        TestConfig {
            dataset: DatasetSource::default(),
            sample_fraction: default_sample_fraction(),
            samples: vec![SampleSpec::undersample(0.3)],
            classifiers: presets::tuned_classifiers(),
            mc_iterations: default_iterations(),
            cost_model: CostModel::default(),
            ga: None,
            master_seed: 0,
            output_dir: default_output_dir(),
        }
    }
}

impl TestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mc_iterations == 0 {
            return Err(Error::Config("mc_iterations must be >= 1".into()));
        }
        if self.samples.is_empty() {
            return Err(Error::Config("the sample grid is empty".into()));
        }
        if self.classifiers.is_empty() {
            return Err(Error::Config("the classifier grid is empty".into()));
        }
        if !(self.sample_fraction > 0.0 && self.sample_fraction < 1.0) {
            return Err(Error::Config(format!(
                "sample_fraction must lie in (0, 1), got {}",
                self.sample_fraction
            )));
        }
        if let DatasetSource::Synthetic {
            records,
            fraud_rate,
        } = &self.dataset
        {
            if *records == 0 || !(*fraud_rate > 0.0 && *fraud_rate < 1.0) {
                return Err(Error::Config(format!(
                    "synthetic source needs records >= 1 and fraud_rate in (0, 1), \
                     got {records} and {fraud_rate}"
                )));
            }
        }
        for spec in &self.samples {
            spec.validate()?;
        }
        for spec in &self.classifiers {
            spec.validate()?;
        }
        if let Some(section) = &self.ga {
            section.config.validate()?;
            if section.members.len() < 2 {
                return Err(Error::Config(format!(
                    "the ensemble needs at least 2 members, got {}",
                    section.members.len()
                )));
            }
            for spec in &section.members {
                spec.validate()?;
            }
        }
        Ok(())
    }
}

/// One (iteration, sample, model) measurement. `wall_ms` is reported via
/// the timing sidecar, never via results.csv, which stays deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    /// 1-based Monte Carlo iteration index.
    pub iteration: usize,
    pub method: SampleMethod,
    /// Requested size; undersampling has none.
    pub target_size: Option<usize>,
    pub fraud_ratio: f64,
    /// SMOTE neighbour count; other methods have none.
    pub k_neighbors: Option<usize>,
    /// The derived seed the sample was actually built with.
    pub sample_seed: u64,
    pub sample_size: usize,
    pub achieved_ratio: f64,
    /// Model label, e.g. `LOG(l1/0.5)`; the ensemble logs as `ENS`.
    pub model: String,
    /// True for the benchmark's control models (GNB, KNN).
    pub control: bool,
    pub counts: ConfusionCounts,
    pub metrics: MetricSet,
    pub cost: Cost,
    pub wall_ms: u128,
}

impl ResultRow {
    pub fn sample_label(&self) -> String {
        match self.method {
            SampleMethod::Simple => format!("simple(n={})", self.target_size.unwrap_or(0)),
            SampleMethod::Undersample => format!("under(r={})", self.fraud_ratio),
            SampleMethod::Smote => format!(
                "smote(n={} r={} k={})",
                self.target_size.unwrap_or(0),
                self.fraud_ratio,
                self.k_neighbors.unwrap_or(0)
            ),
        }
    }
}

/// One generation of one iteration's weight search.
#[derive(Clone, Debug, PartialEq)]
pub struct GaTraceRow {
    pub iteration: usize,
    pub sample: String,
    pub generation: u64,
    pub best_cost: Cost,
    pub mean_cost_units: f64,
    /// Best-so-far weights, one per member.
    pub best_genome: Vec<u64>,
}

/// Wall time of one (iteration, sample, model) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct TimingRow {
    pub iteration: usize,
    pub sample: String,
    pub model: String,
    pub wall_ms: u128,
}

/// Mean and population standard deviation over the defined entries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    /// How many of the combination's rows had the value defined.
    pub defined: usize,
}

fn mean_std(values: &[f64]) -> MeanStd {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    MeanStd {
        mean,
        std: var.sqrt(),
        defined: values.len(),
    }
}

/// Aggregates for one (sample, model) combination.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComboSummary {
    pub sample: String,
    pub model: String,
    pub control: bool,
    pub iterations: usize,
    pub cost: MeanStd,
    /// Per-metric aggregates; metrics undefined in every row are omitted.
    pub metrics: BTreeMap<String, MeanStd>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestCombo {
    pub sample: String,
    pub model: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentMeta {
    pub package_version: String,
    pub os: String,
    pub arch: String,
}

impl Default for EnvironmentMeta {
    fn default() -> EnvironmentMeta {
        EnvironmentMeta {
            package_version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
        }
    }
}

/// Echo of the final genome search, keyed by sample label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleEcho {
    pub members: Vec<String>,
    /// Best genome of the last iteration, per sample.
    pub final_genomes: BTreeMap<String, Vec<u64>>,
}

/// The run's aggregate record: config echo, per-combination statistics,
/// best-combination pointers, and environment metadata. Wall-clock data is
/// excluded so the file is reproducible byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MasterLog {
    pub format_version: u32,
    pub config: TestConfig,
    pub combos: Vec<ComboSummary>,
    /// Lowest mean cost over all combinations.
    pub best_cost: Option<BestCombo>,
    /// Highest mean F1 over combinations where F1 was ever defined.
    pub best_f1: Option<BestCombo>,
    pub ensemble: Option<EnsembleEcho>,
    pub environment: EnvironmentMeta,
}

/// Everything a finished run produced.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub rows: Vec<ResultRow>,
    pub master: MasterLog,
    pub ga_trace: Vec<GaTraceRow>,
    pub timings: Vec<TimingRow>,
}

pub fn load_dataset(source: &DatasetSource, master_seed: u64) -> Result<Dataset> {
    match source {
        DatasetSource::Path(path) => Dataset::load(path),
        DatasetSource::Synthetic {
            records,
            fraud_rate,
        } => Dataset::synthetic(
            *records,
            *fraud_rate,
            derive_seed(master_seed, SeedPurpose::Synthetic, 0),
        ),
    }
}

struct IterationOutput {
    rows: Vec<ResultRow>,
    ga_trace: Vec<GaTraceRow>,
    timings: Vec<TimingRow>,
    /// (sample label, best genome) per sample, when the GA stage ran.
    final_genomes: Vec<(String, Vec<u64>)>,
}

/// Runs the full Monte Carlo loop described by the config.
pub fn run_test(cfg: &TestConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let data = load_dataset(&cfg.dataset, cfg.master_seed)?;

    let mut rows = Vec::new();
    let mut ga_trace = Vec::new();
    let mut timings = Vec::new();
    let mut final_genomes: Vec<(String, Vec<u64>)> = Vec::new();

    for iteration in 1..=cfg.mc_iterations {
        let base = derive_seed(cfg.master_seed, SeedPurpose::Iteration, (iteration - 1) as u64);
        let mut attempt = 0u32;
        loop {
            let iter_seed = if attempt == 0 {
                base
            } else {
                derive_seed(base, SeedPurpose::Retry, attempt as u64)
            };
            match run_iteration(&data, cfg, iteration, iter_seed) {
                Ok(out) => {
                    rows.extend(out.rows);
                    ga_trace.extend(out.ga_trace);
                    timings.extend(out.timings);
                    final_genomes = out.final_genomes;
                    break;
                }
                Err(e) if e.is_retryable() && attempt < MAX_RETRIES => {
                    eprintln!(
                        "warning: iteration {iteration} attempt {} hit a degenerate draw \
                         ({e}); retrying with a fresh seed",
                        attempt + 1
                    );
                    attempt += 1;
                }
                Err(e) if e.is_retryable() => {
                    return Err(Error::Aborted(format!(
                        "iteration {iteration} stayed degenerate through {MAX_RETRIES} \
                         retries; last error: {e}"
                    )));
                }
                Err(e) => return Err(e),
            }
        }
    }

    let master = build_master(cfg, &rows, &final_genomes);
    Ok(RunOutput {
        rows,
        master,
        ga_trace,
        timings,
    })
}

/// One seeded pass: partition, build every sample, train every model on
/// it, and score the test pool plus the sample's leftovers.
fn run_iteration(
    data: &Dataset,
    cfg: &TestConfig,
    iteration: usize,
    iter_seed: u64,
) -> Result<IterationOutput> {
    let partition = data.partition(
        cfg.sample_fraction,
        derive_seed(iter_seed, SeedPurpose::Partition, 0),
    )?;

    let mut rows = Vec::new();
    let mut ga_trace = Vec::new();
    let mut timings = Vec::new();
    let mut final_genomes = Vec::new();

    for (j, spec) in cfg.samples.iter().enumerate() {
        let sample_seed = derive_seed(iter_seed, SeedPurpose::Sample, j as u64);
        let seeded = spec.clone().with_seed(sample_seed);
        let sample = build_sample(&partition.sample_pool, &seeded)?;
        let sample_label = seeded.label();

        // Evaluation side: the held-out pool plus whatever the sample
        // builder did not consume.
        let eval: Vec<&Transaction> = partition
            .test_pool
            .records()
            .iter()
            .chain(sample.leftover().iter())
            .collect();
        let truth: Vec<Label> = eval.iter().map(|t| t.label()).collect();
        let amounts: Vec<Money> = eval.iter().map(|t| t.amount()).collect();

        let row_shell = |model: &str, control: bool| ResultRow {
            iteration,
            method: seeded.method,
            target_size: (seeded.method != SampleMethod::Undersample)
                .then_some(seeded.target_size),
            fraud_ratio: seeded.fraud_ratio,
            k_neighbors: (seeded.method == SampleMethod::Smote).then_some(seeded.k_neighbors),
            sample_seed,
            sample_size: sample.len(),
            achieved_ratio: sample.achieved_ratio(),
            model: model.to_string(),
            control,
            counts: ConfusionCounts::default(),
            metrics: MetricSet::default(),
            cost: Cost::from_ticks(0),
            wall_ms: 0,
        };

        for (m, cspec) in cfg.classifiers.iter().enumerate() {
            let seeded_c = cspec
                .clone()
                .with_seed(derive_seed(sample_seed, SeedPurpose::Classifier, m as u64));
            let started = Instant::now();
            let model = classifiers::train(&seeded_c, &sample)?;
            let predicted = predict_labels(&model, &eval)?;
            let wall_ms = started.elapsed().as_millis();

            let counts = confusion(&predicted, &truth)?;
            let mut row = row_shell(&seeded_c.label(), seeded_c.kind().is_control());
            row.counts = counts;
            row.metrics = derive_metrics(&counts);
            row.cost = fraud_cost(&predicted, &truth, &amounts, &cfg.cost_model)?;
            row.wall_ms = wall_ms;
            timings.push(TimingRow {
                iteration,
                sample: sample_label.clone(),
                model: row.model.clone(),
                wall_ms,
            });
            rows.push(row);
        }

        if let Some(section) = &cfg.ga {
            let started = Instant::now();
            let ga_cfg = GaConfig {
                seed: derive_seed(sample_seed, SeedPurpose::Ensemble, 0),
                ..section.config.clone()
            };
            let outcome = ensemble::evolve(&section.members, &sample, &ga_cfg, &cfg.cost_model)?;
            // The weight search judges members trained on its internal
            // split; the winning weights are then applied to members
            // refit on the whole sample, as with any selected
            // hyperparameter.
            let refit_base = derive_seed(sample_seed, SeedPurpose::Ensemble, 1);
            let members = section
                .members
                .iter()
                .enumerate()
                .map(|(i, spec)| {
                    let seeded = spec
                        .clone()
                        .with_seed(derive_seed(refit_base, SeedPurpose::Classifier, i as u64));
                    classifiers::train(&seeded, &sample)
                })
                .collect::<Result<Vec<_>>>()?;
            let predicted: Vec<Label> = eval
                .iter()
                .map(|t| {
                    ensemble::ensemble_predict(&members, &outcome.best_genome, t)
                        .map(|p| p.label)
                })
                .collect::<Result<_>>()?;
            let wall_ms = started.elapsed().as_millis();

            let counts = confusion(&predicted, &truth)?;
            let mut row = row_shell("ENS", false);
            row.counts = counts;
            row.metrics = derive_metrics(&counts);
            row.cost = fraud_cost(&predicted, &truth, &amounts, &cfg.cost_model)?;
            row.wall_ms = wall_ms;
            timings.push(TimingRow {
                iteration,
                sample: sample_label.clone(),
                model: row.model.clone(),
                wall_ms,
            });
            rows.push(row);

            for stat in &outcome.trace {
                ga_trace.push(GaTraceRow {
                    iteration,
                    sample: sample_label.clone(),
                    generation: stat.generation,
                    best_cost: stat.best,
                    mean_cost_units: stat.mean_units,
                    best_genome: stat.best_genome.weights().to_vec(),
                });
            }
            final_genomes.push((sample_label.clone(), outcome.best_genome.weights().to_vec()));
        }
    }

    Ok(IterationOutput {
        rows,
        ga_trace,
        timings,
        final_genomes,
    })
}

fn predict_labels(model: &TrainedModel, eval: &[&Transaction]) -> Result<Vec<Label>> {
    eval.iter()
        .enumerate()
        .map(|(i, t)| {
            model
                .predict(t)
                .map(|p| p.label)
                .map_err(|e| Error::Input(format!("record {i}: {e}")))
        })
        .collect()
}

/// Combination keys in first-appearance order.
fn combo_order(rows: &[ResultRow]) -> Vec<(String, String)> {
    let mut order: Vec<(String, String)> = Vec::new();
    for row in rows {
        let key = (row.sample_label(), row.model.clone());
        if !order.contains(&key) {
            order.push(key);
        }
    }
    order
}

/// Aggregates rows per (sample, model) combination. Metric means skip
/// rows where the metric is undefined; combinations keep first-appearance
/// order so re-aggregation is reproducible.
pub fn summarize_combos(rows: &[ResultRow]) -> Vec<ComboSummary> {
    combo_order(rows)
        .into_iter()
        .map(|(sample, model)| {
            let members: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| r.sample_label() == sample && r.model == model)
                .collect();
            let costs: Vec<f64> = members.iter().map(|r| r.cost.as_units()).collect();
            let mut metrics = BTreeMap::new();
            for (name, _) in MetricSet::default().as_pairs() {
                let defined: Vec<f64> = members
                    .iter()
                    .filter_map(|r| {
                        r.metrics
                            .as_pairs()
                            .iter()
                            .find(|(n, _)| *n == name)
                            .and_then(|(_, v)| *v)
                    })
                    .collect();
                if !defined.is_empty() {
                    metrics.insert(name.to_string(), mean_std(&defined));
                }
            }
            ComboSummary {
                sample,
                model,
                control: members.iter().any(|r| r.control),
                iterations: members.len(),
                cost: mean_std(&costs),
                metrics,
            }
        })
        .collect()
}

/// Builds the master log from finished rows.
pub fn build_master(
    cfg: &TestConfig,
    rows: &[ResultRow],
    final_genomes: &[(String, Vec<u64>)],
) -> MasterLog {
    let combos = summarize_combos(rows);
    let best_cost = combos
        .iter()
        .min_by(|a, b| a.cost.mean.total_cmp(&b.cost.mean))
        .map(|c| BestCombo {
            sample: c.sample.clone(),
            model: c.model.clone(),
            value: c.cost.mean,
        });
    let best_f1 = combos
        .iter()
        .filter_map(|c| c.metrics.get("f1").map(|m| (c, m.mean)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(c, value)| BestCombo {
            sample: c.sample.clone(),
            model: c.model.clone(),
            value,
        });
    let ensemble = cfg.ga.as_ref().map(|section| EnsembleEcho {
        members: section.members.iter().map(|s| s.label()).collect(),
        final_genomes: final_genomes.iter().cloned().collect(),
    });
    MasterLog {
        format_version: MASTER_FORMAT_VERSION,
        config: cfg.clone(),
        combos,
        best_cost,
        best_f1,
        ensemble,
        environment: EnvironmentMeta::default(),
    }
}
