//! Bootstrapping parameter search.
//!
//! The sample grid and the classifier grid are searched in alternating
//! phases: first every sample spec is scored under the current classifier
//! parameters and the cheapest one (by mean cost across classifiers)
//! wins; then every classifier parameterization is scored on that winning
//! sample and each classifier family keeps its cheapest entry. The loop
//! repeats until a round changes nothing or the round cap is hit.
//!
//! After the first sample phase, classifier families that are grossly
//! uncompetitive — mean cost positive and at least ten times the grid
//! median in magnitude under every sampling method — are dropped from all
//! later phases.

use crate::classifiers::{ClassifierKind, ClassifierSpec};
use crate::error::{Error, Result};
use crate::evaluation::CostModel;
use crate::harness::{presets, run_test, DatasetSource, ResultRow, TestConfig};
use crate::rng::{derive_seed, SeedPurpose};
use crate::sampling::{SampleMethod, SampleSpec};
use serde::{Deserialize, Serialize};

/// How many times a cost may exceed the grid median in magnitude before
/// its family is dropped.
const DROP_FACTOR: f64 = 10.0;

fn default_search_iterations() -> usize {
    10
}

fn default_round_cap() -> usize {
    5
}

fn default_sample_fraction() -> f64 {
    0.2
}

/// Grids and budgets for [`bootstrap_search`]. JSON form rejects unknown
/// keys; every field has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub dataset: DatasetSource,
    pub sample_fraction: f64,
    pub sample_grid: Vec<SampleSpec>,
    pub classifier_grid: Vec<ClassifierSpec>,
    /// Parameterizations used in sample phases before any tuning exists.
    pub default_classifiers: Vec<ClassifierSpec>,
    pub mc_iterations: usize,
    pub cost_model: CostModel,
    pub master_seed: u64,
    pub round_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            dataset: DatasetSource::default(),
            sample_fraction: default_sample_fraction(),
            sample_grid: presets::table_sample_grid(),
            classifier_grid: presets::table_classifier_grid(),
            default_classifiers: presets::default_classifiers(),
            mc_iterations: default_search_iterations(),
            cost_model: CostModel::default(),
            master_seed: 0,
            round_cap: default_round_cap(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sample_grid.is_empty() {
            return Err(Error::Config("the sample grid is empty".into()));
        }
        if self.classifier_grid.is_empty() {
            return Err(Error::Config("the classifier grid is empty".into()));
        }
        if self.default_classifiers.is_empty() {
            return Err(Error::Config("no default classifiers given".into()));
        }
        if self.mc_iterations == 0 {
            return Err(Error::Config("mc_iterations must be >= 1".into()));
        }
        if self.round_cap == 0 {
            return Err(Error::Config("round_cap must be >= 1".into()));
        }
        if !(self.sample_fraction > 0.0 && self.sample_fraction < 1.0) {
            return Err(Error::Config(format!(
                "sample_fraction must lie in (0, 1), got {}",
                self.sample_fraction
            )));
        }
        for spec in self
            .sample_grid
            .iter()
        {
            spec.validate()?;
        }
        for spec in self.classifier_grid.iter().chain(&self.default_classifiers) {
            spec.validate()?;
        }
        Ok(())
    }
}

/// One round's choices, for the search log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundChoice {
    pub round: usize,
    pub sample: SampleSpec,
    pub classifiers: Vec<ClassifierSpec>,
}

/// What the search settled on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub best_sample: SampleSpec,
    pub best_classifiers: Vec<ClassifierSpec>,
    /// Families excluded after the first sample phase.
    pub dropped: Vec<ClassifierKind>,
    pub rounds: usize,
    /// False when the round cap stopped an oscillating search.
    pub converged: bool,
    pub history: Vec<RoundChoice>,
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

fn median(sorted: &mut Vec<f64>) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    Some(if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    })
}

fn kind_of(label: &str, specs: &[ClassifierSpec]) -> Option<ClassifierKind> {
    specs
        .iter()
        .find(|s| s.label() == label)
        .map(|s| s.kind())
}

/// Families whose mean cost is positive and at least [`DROP_FACTOR`]
/// times the grid median in magnitude under every sampling method seen.
pub(crate) fn compute_drops(rows: &[ResultRow], specs: &[ClassifierSpec]) -> Vec<ClassifierKind> {
    let mut methods: Vec<SampleMethod> = Vec::new();
    for row in rows {
        if !methods.contains(&row.method) {
            methods.push(row.method);
        }
    }
    let mut kinds: Vec<ClassifierKind> = Vec::new();
    for spec in specs {
        if !kinds.contains(&spec.kind()) {
            kinds.push(spec.kind());
        }
    }

    let mean_for = |kind: ClassifierKind, method: SampleMethod| {
        let costs: Vec<f64> = rows
            .iter()
            .filter(|r| r.method == method && kind_of(&r.model, specs) == Some(kind))
            .map(|r| r.cost.as_units())
            .collect();
        mean(&costs)
    };

    kinds
        .iter()
        .copied()
        .filter(|&kind| {
            methods.iter().all(|&method| {
                let Some(kind_mean) = mean_for(kind, method) else {
                    return false;
                };
                let mut all_means: Vec<f64> = kinds
                    .iter()
                    .filter_map(|&k| mean_for(k, method))
                    .collect();
                let Some(grid_median) = median(&mut all_means) else {
                    return false;
                };
                kind_mean > 0.0 && kind_mean >= DROP_FACTOR * grid_median.abs()
            })
        })
        .collect()
}

/// The grid sample whose mean cost across all logged models is lowest;
/// ties keep grid order.
fn pick_best_sample(rows: &[ResultRow], grid: &[SampleSpec]) -> Result<SampleSpec> {
    let mut best: Option<(f64, &SampleSpec)> = None;
    for spec in grid {
        let label = spec.label();
        let costs: Vec<f64> = rows
            .iter()
            .filter(|r| r.sample_label() == label)
            .map(|r| r.cost.as_units())
            .collect();
        let Some(m) = mean(&costs) else { continue };
        if best.is_none_or(|(b, _)| m < b) {
            best = Some((m, spec));
        }
    }
    best.map(|(_, s)| s.clone())
        .ok_or_else(|| Error::Aborted("no sample in the grid produced any rows".into()))
}

/// Per family, the grid entry with the lowest mean cost; families keep
/// their first-appearance order and ties keep grid order.
fn pick_best_classifiers(rows: &[ResultRow], grid: &[ClassifierSpec]) -> Vec<ClassifierSpec> {
    let mut kinds: Vec<ClassifierKind> = Vec::new();
    for spec in grid {
        if !kinds.contains(&spec.kind()) {
            kinds.push(spec.kind());
        }
    }
    kinds
        .into_iter()
        .filter_map(|kind| {
            let mut best: Option<(f64, &ClassifierSpec)> = None;
            for spec in grid.iter().filter(|s| s.kind() == kind) {
                let label = spec.label();
                let costs: Vec<f64> = rows
                    .iter()
                    .filter(|r| r.model == label)
                    .map(|r| r.cost.as_units())
                    .collect();
                let Some(m) = mean(&costs) else { continue };
                if best.is_none_or(|(b, _)| m < b) {
                    best = Some((m, spec));
                }
            }
            best.map(|(_, s)| s.clone())
        })
        .collect()
}

fn without_kinds(specs: &[ClassifierSpec], dropped: &[ClassifierKind]) -> Vec<ClassifierSpec> {
    specs
        .iter()
        .filter(|s| !dropped.contains(&s.kind()))
        .cloned()
        .collect()
}

/// Alternates sample and classifier phases until the choices stop
/// changing or the round cap is hit.
pub fn bootstrap_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;

    let mut classifiers = cfg.default_classifiers.clone();
    let mut dropped: Vec<ClassifierKind> = Vec::new();
    let mut history: Vec<RoundChoice> = Vec::new();
    let mut previous: Option<(SampleSpec, Vec<ClassifierSpec>)> = None;
    let mut converged = false;
    let mut rounds = 0;

    for round in 1..=cfg.round_cap {
        rounds = round;

        // Phase (a): score every sample spec under the current
        // classifier parameters.
        let sample_run = run_test(&TestConfig {
            dataset: cfg.dataset.clone(),
            sample_fraction: cfg.sample_fraction,
            samples: cfg.sample_grid.clone(),
            classifiers: classifiers.clone(),
            mc_iterations: cfg.mc_iterations,
            cost_model: cfg.cost_model,
            ga: None,
            master_seed: derive_seed(cfg.master_seed, SeedPurpose::Search, (round as u64 - 1) * 2),
            ..TestConfig::default()
        })?;

        if round == 1 {
            dropped = compute_drops(&sample_run.rows, &classifiers);
            if dropped.len() == classifiers.iter().map(|s| s.kind()).collect::<Vec<_>>().len() {
                return Err(Error::Aborted(
                    "every classifier family was dropped in round 1".into(),
                ));
            }
        }
        let keep = |r: &&ResultRow| {
            kind_of(&r.model, &classifiers).is_none_or(|k| !dropped.contains(&k))
        };
        let kept_rows: Vec<ResultRow> = sample_run.rows.iter().filter(keep).cloned().collect();
        let best_sample = pick_best_sample(&kept_rows, &cfg.sample_grid)?;

        // Phase (b): tune every surviving classifier family on the
        // winning sample.
        let grid = without_kinds(&cfg.classifier_grid, &dropped);
        let classifier_run = run_test(&TestConfig {
            dataset: cfg.dataset.clone(),
            sample_fraction: cfg.sample_fraction,
            samples: vec![best_sample.clone()],
            classifiers: grid.clone(),
            mc_iterations: cfg.mc_iterations,
            cost_model: cfg.cost_model,
            ga: None,
            master_seed: derive_seed(
                cfg.master_seed,
                SeedPurpose::Search,
                (round as u64 - 1) * 2 + 1,
            ),
            ..TestConfig::default()
        })?;
        classifiers = pick_best_classifiers(&classifier_run.rows, &grid);
        if classifiers.is_empty() {
            return Err(Error::Aborted(
                "the classifier phase produced no tuned parameters".into(),
            ));
        }

        history.push(RoundChoice {
            round,
            sample: best_sample.clone(),
            classifiers: classifiers.clone(),
        });

        let choice = (best_sample, classifiers.clone());
        if previous.as_ref() == Some(&choice) {
            converged = true;
            break;
        }
        previous = Some(choice);
    }

    let (best_sample, best_classifiers) = previous.expect("at least one round ran");
    Ok(SearchOutcome {
        best_sample,
        best_classifiers,
        dropped,
        rounds,
        converged,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::{ConfusionCounts, MetricSet};
    use crate::money::Cost;

    fn cost_row(method: SampleMethod, model: &str, units: f64) -> ResultRow {
        ResultRow {
            iteration: 1,
            method,
            target_size: (method != SampleMethod::Undersample).then_some(1000),
            fraud_ratio: 0.3,
            k_neighbors: (method == SampleMethod::Smote).then_some(5),
            sample_seed: 0,
            sample_size: 1000,
            achieved_ratio: 0.3,
            model: model.to_string(),
            control: false,
            counts: ConfusionCounts::default(),
            metrics: MetricSet::default(),
            cost: Cost::from_units(units),
            wall_ms: 0,
        }
    }

    #[test]
    fn drop_rule_removes_grossly_uncompetitive_families() {
        let specs = presets::default_classifiers();
        let mut rows = Vec::new();
        for method in [SampleMethod::Undersample, SampleMethod::Smote] {
            rows.push(cost_row(method, "LOG(l2/1)", -100.0));
            rows.push(cost_row(method, "SVC(l2/1)", -90.0));
            rows.push(cost_row(method, "RF(100)", -80.0));
            rows.push(cost_row(method, "GNB", -60.0));
            rows.push(cost_row(method, "KNN(5)", 2_000.0));
        }
        assert_eq!(compute_drops(&rows, &specs), vec![ClassifierKind::Knn]);
    }

    #[test]
    fn drop_rule_needs_the_excess_under_every_method() {
        let specs = presets::default_classifiers();
        let mut rows = Vec::new();
        for (method, knn_cost) in [
            (SampleMethod::Undersample, 2_000.0),
            // Cheap under SMOTE, so KNN survives.
            (SampleMethod::Smote, -10.0),
        ] {
            rows.push(cost_row(method, "LOG(l2/1)", -100.0));
            rows.push(cost_row(method, "SVC(l2/1)", -90.0));
            rows.push(cost_row(method, "RF(100)", -80.0));
            rows.push(cost_row(method, "GNB", -60.0));
            rows.push(cost_row(method, "KNN(5)", knn_cost));
        }
        assert!(compute_drops(&rows, &specs).is_empty());
    }

    #[test]
    fn singleton_grids_converge_in_two_rounds() {
        let cfg = SearchConfig {
            dataset: DatasetSource::Synthetic {
                records: 2_000,
                fraud_rate: 0.03,
            },
            sample_grid: vec![SampleSpec::undersample(0.3)],
            classifier_grid: vec![ClassifierSpec::Gnb],
            default_classifiers: vec![ClassifierSpec::Gnb],
            mc_iterations: 1,
            master_seed: 5,
            ..SearchConfig::default()
        };
        let outcome = bootstrap_search(&cfg).unwrap();
        assert!(outcome.converged);
        assert_eq!(outcome.rounds, 2);
        assert_eq!(outcome.best_sample, SampleSpec::undersample(0.3));
        assert_eq!(outcome.best_classifiers, vec![ClassifierSpec::Gnb]);
        assert!(outcome.dropped.is_empty());
        assert_eq!(outcome.history.len(), 2);
    }

    #[test]
    fn search_prefers_the_sample_with_planted_cost_advantage() {
        // False positives are made ruinous, so the low-fraud-ratio sample
        // (whose model raises far fewer alarms) must win phase (a).
        let cfg = SearchConfig {
            dataset: DatasetSource::Synthetic {
                records: 4_000,
                fraud_rate: 0.05,
            },
            sample_grid: vec![SampleSpec::undersample(0.1), SampleSpec::undersample(0.5)],
            classifier_grid: vec![ClassifierSpec::Gnb],
            default_classifiers: vec![ClassifierSpec::Gnb],
            mc_iterations: 2,
            cost_model: CostModel::new(10.0, 1_000.0, 10.0, 0.0).unwrap(),
            master_seed: 9,
            round_cap: 1,
            ..SearchConfig::default()
        };
        let outcome = bootstrap_search(&cfg).unwrap();
        assert_eq!(outcome.best_sample, SampleSpec::undersample(0.1));
        assert!(!outcome.converged, "one round cannot prove convergence");
    }
}
