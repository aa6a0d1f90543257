//! Genetic-algorithm search for voting weights over trained classifiers.
//!
//! A genome holds one 40-bit integer weight per ensemble member; the
//! ensemble scores a record as the weight-normalized mean of member scores.
//! Evolution is generational: fitness is the fraud cost of the weighted
//! vote on a held-out validation slice, parents are drawn by a
//! rank-free roulette over shifted-positive fitnesses, and children are
//! built by per-weight single-point crossover, per-bit mutation, and a
//! weight-ceiling repair. The best genome ever observed is tracked outside
//! the population, which is fully replaced each generation.

use crate::classifiers::{self, ClassifierSpec, TrainedModel};
use crate::data::Transaction;
use crate::error::{Error, Result};
use crate::evaluation::{fraud_cost, CostModel};
use crate::money::Cost;
use crate::rng::{derive_seed, seeded_rng, SeedPurpose};
use crate::sampling::Sample;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Width of one weight; weights live in `[1, 2^WEIGHT_BITS)`.
pub const WEIGHT_BITS: u32 = 40;
/// Exclusive upper bound of a weight.
pub const WEIGHT_BOUND: u64 = 1 << WEIGHT_BITS;

const WEIGHT_MASK: u64 = WEIGHT_BOUND - 1;

/// One candidate weighting: an integer weight per ensemble member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Genome {
    weights: Vec<u64>,
}

impl Genome {
    /// Validates every weight into `[1, 2^40)`.
    pub fn new(weights: Vec<u64>) -> Result<Genome> {
        if weights.is_empty() {
            return Err(Error::Parameter("genome needs at least one weight".into()));
        }
        if let Some(w) = weights.iter().find(|&&w| w == 0 || w >= WEIGHT_BOUND) {
            return Err(Error::Parameter(format!(
                "weight {w} outside [1, 2^{WEIGHT_BITS})"
            )));
        }
        Ok(Genome { weights })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weights normalized to fractions of their total.
    pub fn fractions(&self) -> Vec<f64> {
        let total: u64 = self.weights.iter().sum();
        self.weights
            .iter()
            .map(|&w| w as f64 / total as f64)
            .collect()
    }
}

/// A generation of genomes plus their fitnesses once evaluated.
#[derive(Clone, Debug)]
pub struct Population {
    pub genomes: Vec<Genome>,
    /// Parallel to `genomes`; empty until evaluated. Lower cost is fitter.
    pub fitnesses: Vec<Cost>,
}

impl Population {
    pub fn from_genomes(genomes: Vec<Genome>) -> Population {
        Population {
            genomes,
            fitnesses: Vec::new(),
        }
    }

    fn evaluate<F>(&mut self, fitness: &mut F) -> Result<()>
    where
        F: FnMut(&Genome) -> Result<Cost>,
    {
        self.fitnesses = self
            .genomes
            .iter()
            .map(|g| fitness(g))
            .collect::<Result<Vec<Cost>>>()?;
        Ok(())
    }
}

/// Knobs of the weight search. `generations` replaces the wall-clock
/// budget with a fixed generation count, making runs bit-deterministic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub population_size: usize,
    /// Per-bit flip probability.
    pub mutation_rate: f64,
    pub time_budget_secs: f64,
    /// Ceiling on any weight's share of the total.
    pub w_max: f64,
    /// Share of the sample the members train on; the rest scores genomes.
    pub train_fraction: f64,
    pub seed: u64,
    pub generations: Option<u64>,
}

impl Default for GaConfig {
    fn default() -> GaConfig {
        GaConfig {
            population_size: 50,
            mutation_rate: 0.001,
            time_budget_secs: 60.0,
            w_max: 0.49,
            train_fraction: 0.6,
            seed: 0,
            generations: None,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::Parameter(format!(
                "population_size must be >= 2, got {}",
                self.population_size
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::Parameter(format!(
                "mutation_rate must lie in [0, 1], got {}",
                self.mutation_rate
            )));
        }
        if !(self.w_max > 0.0 && self.w_max < 1.0) {
            return Err(Error::Parameter(format!(
                "w_max must lie in (0, 1), got {}",
                self.w_max
            )));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Parameter(format!(
                "train_fraction must lie in (0, 1), got {}",
                self.train_fraction
            )));
        }
        if self.generations.is_none()
            && !(self.time_budget_secs.is_finite() && self.time_budget_secs > 0.0)
        {
            return Err(Error::Parameter(format!(
                "time_budget_secs must be positive, got {}",
                self.time_budget_secs
            )));
        }
        Ok(())
    }
}

/// Draws `population_size` genomes of `n_members` weights, each uniform
/// over `[1, 2^40)`, from the config seed. Fitnesses start empty.
pub fn init_population(cfg: &GaConfig, n_members: usize) -> Result<Population> {
    cfg.validate()?;
    if n_members < 2 {
        return Err(Error::Parameter(format!(
            "an ensemble needs at least 2 members, got {n_members}"
        )));
    }
    let mut rng = seeded_rng(derive_seed(cfg.seed, SeedPurpose::GaInit, 0));
    let genomes = (0..cfg.population_size)
        .map(|_| {
            let weights = (0..n_members)
                .map(|_| rng.gen_range(1..WEIGHT_BOUND))
                .collect();
            Genome { weights }
        })
        .collect();
    Ok(Population::from_genomes(genomes))
}

/// Roulette probabilities over fitnesses in currency units, lower cost
/// fitter: f_p,i = f_i − f_min + 1, then
/// P(i) = (f_p,max + 1 − f_p,i) / Σ_j (f_p,max + 1 − f_p,j).
/// Shifting every fitness by a constant leaves the result unchanged.
pub fn selection_probabilities(fitness_units: &[f64]) -> Result<Vec<f64>> {
    if fitness_units.is_empty() {
        return Err(Error::Input("no fitnesses to select from".into()));
    }
    if fitness_units.iter().any(|f| !f.is_finite()) {
        return Err(Error::Input("non-finite fitness".into()));
    }
    let numerators = selection_numerators(fitness_units);
    let total: f64 = numerators.iter().sum();
    Ok(numerators.into_iter().map(|n| n / total).collect())
}

fn selection_numerators(fitness_units: &[f64]) -> Vec<f64> {
    let f_min = fitness_units.iter().copied().fold(f64::INFINITY, f64::min);
    let positive: Vec<f64> = fitness_units.iter().map(|f| f - f_min + 1.0).collect();
    let p_max = positive.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    positive.into_iter().map(|p| p_max + 1.0 - p).collect()
}

/// Splices `a`'s bits at and above `cut` with `b`'s bits below it.
fn splice_bits(a: u64, b: u64, cut: u32) -> u64 {
    let low_mask = (1u64 << cut) - 1;
    ((a & !low_mask) | (b & low_mask)) & WEIGHT_MASK
}

/// Per-weight single-point crossover: each child weight takes `a`'s high
/// bits above a uniform cut in [1, 39] and `b`'s low bits below it, then
/// is clamped into `[1, 2^40)`.
pub fn crossover(a: &Genome, b: &Genome, rng: &mut ChaCha12Rng) -> Result<Genome> {
    if a.len() != b.len() {
        return Err(Error::Input(format!(
            "genome length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let weights = a
        .weights
        .iter()
        .zip(&b.weights)
        .map(|(&wa, &wb)| {
            let cut = rng.gen_range(1..WEIGHT_BITS);
            splice_bits(wa, wb, cut).max(1)
        })
        .collect();
    Ok(Genome { weights })
}

/// Flips each of the 40 bits of every weight independently with
/// probability `rate`; a weight mutated to zero is repaired to 1. The RNG
/// advances by exactly one draw per bit regardless of flips.
pub fn mutate(g: &Genome, rate: f64, rng: &mut ChaCha12Rng) -> Genome {
    let weights = g
        .weights
        .iter()
        .map(|&w| {
            let mut out = w;
            for bit in 0..WEIGHT_BITS {
                if rng.gen::<f64>() < rate {
                    out ^= 1 << bit;
                }
            }
            out.max(1)
        })
        .collect();
    Genome { weights }
}

/// Caps every weight at `w_max` of the genome total: any violating weight
/// is floored to `w_max` times the current total (minimum 1) and the total
/// recomputed, until no weight violates. Terminates because the total
/// strictly shrinks; infeasible when `w_max · n < 1`.
pub fn repair_ceiling(g: &Genome, w_max: f64) -> Result<Genome> {
    if w_max * (g.len() as f64) < 1.0 {
        return Err(Error::InfeasibleCeiling(format!(
            "{} members cannot all fit under a {w_max} share",
            g.len()
        )));
    }
    let mut weights = g.weights.clone();
    loop {
        let total: u64 = weights.iter().sum();
        let ceiling = w_max * total as f64;
        match weights.iter_mut().find(|w| **w as f64 > ceiling) {
            Some(w) => *w = (ceiling.floor() as u64).max(1),
            None => return Ok(Genome { weights }),
        }
    }
}

/// Weight-normalized mean of member scores; weights are integers so the
/// result is a convex combination in [min score, max score].
pub fn weighted_mean_score(scores: &[f64], weights: &[u64]) -> Result<f64> {
    if scores.len() != weights.len() || scores.is_empty() {
        return Err(Error::Input(format!(
            "score/weight length mismatch: {} vs {}",
            scores.len(),
            weights.len()
        )));
    }
    let total: f64 = weights.iter().map(|&w| w as f64).sum();
    let dot: f64 = scores
        .iter()
        .zip(weights)
        .map(|(s, &w)| s * w as f64)
        .sum();
    Ok(dot / total)
}

/// Scores one record with every member and returns the weighted-average
/// prediction, labelled at 0.5.
pub fn ensemble_predict(
    members: &[TrainedModel],
    genome: &Genome,
    record: &Transaction,
) -> Result<classifiers::Prediction> {
    if members.len() != genome.len() {
        return Err(Error::Input(format!(
            "member/weight count mismatch: {} vs {}",
            members.len(),
            genome.len()
        )));
    }
    let scores = members
        .iter()
        .map(|m| m.predict(record).map(|p| p.score))
        .collect::<Result<Vec<f64>>>()?;
    let score = weighted_mean_score(&scores, genome.weights())?;
    Ok(classifiers::Prediction::from_score(score))
}

/// One row of the evolution trace. `best` is the best fitness ever seen
/// up to this generation; `mean_units` is the current population mean.
#[derive(Clone, Debug, PartialEq)]
pub struct GenerationStat {
    pub generation: u64,
    pub best: Cost,
    pub mean_units: f64,
    pub best_genome: Genome,
}

/// Outcome of one evolution loop.
#[derive(Clone, Debug)]
pub struct GaRun {
    pub best_genome: Genome,
    pub best_fitness: Cost,
    pub trace: Vec<GenerationStat>,
    pub generations: u64,
    /// Fitnesses of the initial population, in genome order.
    pub initial_fitnesses: Vec<Cost>,
}

/// Evolves `initial` under `cfg`, drawing selection, crossover, and
/// mutation serially from `rng`. Runs `cfg.generations` generations when
/// set, otherwise until the time budget expires (checked between
/// generations). Returns the best genome ever observed.
pub fn evolve_population<F>(
    initial: Population,
    cfg: &GaConfig,
    rng: &mut ChaCha12Rng,
    mut fitness: F,
) -> Result<GaRun>
where
    F: FnMut(&Genome) -> Result<Cost>,
{
    cfg.validate()?;
    if initial.genomes.is_empty() {
        return Err(Error::Input("initial population is empty".into()));
    }
    let mut population = initial;
    population.evaluate(&mut fitness)?;
    let initial_fitnesses = population.fitnesses.clone();

    let best_of = |p: &Population| {
        let (i, &f) = p
            .fitnesses
            .iter()
            .enumerate()
            .min_by_key(|&(_, f)| f)
            .expect("population is non-empty");
        (p.genomes[i].clone(), f)
    };
    let (mut best_genome, mut best_fitness) = best_of(&population);

    let mean_units = |p: &Population| {
        p.fitnesses.iter().map(|f| f.as_units()).sum::<f64>() / p.fitnesses.len() as f64
    };
    let mut trace = vec![GenerationStat {
        generation: 0,
        best: best_fitness,
        mean_units: mean_units(&population),
        best_genome: best_genome.clone(),
    }];

    let start = Instant::now();
    let mut generation = 0u64;
    loop {
        let done = match cfg.generations {
            Some(limit) => generation >= limit,
            None => start.elapsed().as_secs_f64() >= cfg.time_budget_secs,
        };
        if done {
            break;
        }
        generation += 1;

        let units: Vec<f64> = population.fitnesses.iter().map(|f| f.as_units()).collect();
        let roulette = WeightedIndex::new(selection_numerators(&units))
            .map_err(|e| Error::Input(format!("selection weights: {e}")))?;
        let children = (0..cfg.population_size)
            .map(|_| {
                let a = &population.genomes[roulette.sample(rng)];
                let b = &population.genomes[roulette.sample(rng)];
                let child = crossover(a, b, rng)?;
                let child = mutate(&child, cfg.mutation_rate, rng);
                repair_ceiling(&child, cfg.w_max)
            })
            .collect::<Result<Vec<Genome>>>()?;
        population = Population::from_genomes(children);
        population.evaluate(&mut fitness)?;

        // Ties go to the newer genome: children have all been through
        // repair, while generation-0 genomes may breach the weight
        // ceiling, and a tying repaired genome is the safer pick.
        let (gen_best_genome, gen_best_fitness) = best_of(&population);
        if gen_best_fitness <= best_fitness {
            best_fitness = gen_best_fitness;
            best_genome = gen_best_genome;
        }
        trace.push(GenerationStat {
            generation,
            best: best_fitness,
            mean_units: mean_units(&population),
            best_genome: best_genome.clone(),
        });
    }

    Ok(GaRun {
        best_genome,
        best_fitness,
        trace,
        generations: generation,
        initial_fitnesses,
    })
}

/// A finished weight search: the winning genome, its validation fitness,
/// the member models it weights, and the evolution trace.
#[derive(Clone, Debug)]
pub struct EvolveOutcome {
    pub best_genome: Genome,
    pub best_fitness: Cost,
    pub members: Vec<TrainedModel>,
    pub trace: Vec<GenerationStat>,
    pub generations: u64,
    /// Fitnesses of the initial population, in genome order.
    pub initial_fitnesses: Vec<Cost>,
    pub train_size: usize,
    pub validation_size: usize,
}

/// Splits the sample at `cfg.train_fraction`, trains one member per spec
/// on the training part, caches member scores on the validation part, and
/// evolves voting weights against the validation fraud cost.
pub fn evolve(
    member_specs: &[ClassifierSpec],
    sample: &Sample,
    cfg: &GaConfig,
    cost_model: &CostModel,
) -> Result<EvolveOutcome> {
    cfg.validate()?;
    if member_specs.len() < 2 {
        return Err(Error::Parameter(format!(
            "an ensemble needs at least 2 members, got {}",
            member_specs.len()
        )));
    }
    if cfg.w_max * (member_specs.len() as f64) < 1.0 {
        return Err(Error::InfeasibleCeiling(format!(
            "{} members cannot all fit under a {} share",
            member_specs.len(),
            cfg.w_max
        )));
    }

    let (train, validation) = split_sample(sample, cfg)?;

    let members = member_specs
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let seeded = spec
                .clone()
                .with_seed(derive_seed(cfg.seed, SeedPurpose::Classifier, i as u64));
            classifiers::train(&seeded, &train)
        })
        .collect::<Result<Vec<TrainedModel>>>()?;

    // Member scores are fixed across the whole search: compute them once.
    let member_scores: Vec<Vec<f64>> = members
        .iter()
        .map(|m| {
            m.predict_batch(&validation)
                .map(|ps| ps.iter().map(|p| p.score).collect())
        })
        .collect::<Result<_>>()?;
    let truth: Vec<_> = validation.iter().map(|t| t.label()).collect();
    let amounts: Vec<_> = validation.iter().map(|t| t.amount()).collect();

    let fitness = |g: &Genome| {
        let total: f64 = g.weights().iter().map(|&w| w as f64).sum();
        let predicted: Vec<_> = (0..validation.len())
            .map(|r| {
                let score: f64 = member_scores
                    .iter()
                    .zip(g.weights())
                    .map(|(s, &w)| s[r] * w as f64)
                    .sum::<f64>()
                    / total;
                crate::data::Label::from_fraud_flag(score >= 0.5)
            })
            .collect();
        fraud_cost(&predicted, &truth, &amounts, cost_model)
    };

    let initial = init_population(cfg, member_specs.len())?;
    let mut rng = seeded_rng(derive_seed(cfg.seed, SeedPurpose::GaLoop, 0));
    let run = evolve_population(initial, cfg, &mut rng, fitness)?;

    Ok(EvolveOutcome {
        best_genome: run.best_genome,
        best_fitness: run.best_fitness,
        members,
        trace: run.trace,
        generations: run.generations,
        initial_fitnesses: run.initial_fitnesses,
        train_size: train.len(),
        validation_size: validation.len(),
    })
}

/// Seeded train/validation split of the sample records; both parts must
/// contain both classes.
fn split_sample(sample: &Sample, cfg: &GaConfig) -> Result<(Sample, Vec<Transaction>)> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::DegenerateSplit(format!(
            "sample of {n} records cannot be split"
        )));
    }
    let take = (cfg.train_fraction * n as f64).round() as usize;
    if take == 0 || take >= n {
        return Err(Error::DegenerateSplit(format!(
            "train fraction {} leaves an empty part on {n} records",
            cfg.train_fraction
        )));
    }
    let mut rng = seeded_rng(derive_seed(cfg.seed, SeedPurpose::GaSplit, 0));
    let mut chosen = rand::seq::index::sample(&mut rng, n, take).into_vec();
    chosen.sort_unstable();

    let records = sample.records();
    let flags = sample.synthetic_flags();
    let mut train_records = Vec::with_capacity(take);
    let mut train_flags = Vec::with_capacity(take);
    let mut validation = Vec::with_capacity(n - take);
    let mut next = chosen.into_iter().peekable();
    for (i, record) in records.iter().enumerate() {
        if next.peek() == Some(&i) {
            next.next();
            train_records.push(record.clone());
            train_flags.push(flags[i]);
        } else {
            validation.push(record.clone());
        }
    }

    let class_mix = |rs: &[Transaction]| {
        let fraud = rs.iter().filter(|t| t.is_fraud()).count();
        fraud > 0 && fraud < rs.len()
    };
    if !class_mix(&train_records) || !class_mix(&validation) {
        return Err(Error::DegenerateSplit(
            "a split part is missing one of the classes".into(),
        ));
    }
    Ok((
        Sample::from_parts(train_records, train_flags, Vec::new()),
        validation,
    ))
}
