//! Rebalanced training-sample construction.
//!
//! Three builders share one surface: a plain random draw, undersampling of
//! the majority class to a requested fraud ratio, and SMOTE, which keeps
//! every real fraud record and interpolates synthetic ones between minority
//! neighbours. Pool records a builder does not consume land in `leftover`
//! so the harness can return them to the evaluation side.

use crate::data::{Dataset, Label, Transaction, FEATURE_COUNT};
use crate::error::{Error, Result};
use crate::money::Money;
use crate::rng::seeded_rng;
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleMethod {
    Simple,
    #[serde(alias = "under")]
    Undersample,
    Smote,
}

impl SampleMethod {
    pub fn name(self) -> &'static str {
        match self {
            SampleMethod::Simple => "simple",
            SampleMethod::Undersample => "under",
            SampleMethod::Smote => "smote",
        }
    }
}

fn default_k_neighbors() -> usize {
    5
}

/// Requested sample geometry. `target_size` does not apply to
/// undersampling, `fraud_ratio` not to simple sampling, and `k_neighbors`
/// only to SMOTE; unused fields are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSpec {
    pub method: SampleMethod,
    #[serde(default)]
    pub target_size: usize,
    #[serde(default)]
    pub fraud_ratio: f64,
    #[serde(default = "default_k_neighbors")]
    pub k_neighbors: usize,
    #[serde(default)]
    pub seed: u64,
}

impl SampleSpec {
    pub fn undersample(fraud_ratio: f64) -> SampleSpec {
        SampleSpec {
            method: SampleMethod::Undersample,
            target_size: 0,
            fraud_ratio,
            k_neighbors: default_k_neighbors(),
            seed: 0,
        }
    }

    pub fn smote(target_size: usize, fraud_ratio: f64) -> SampleSpec {
        SampleSpec {
            method: SampleMethod::Smote,
            target_size,
            fraud_ratio,
            k_neighbors: default_k_neighbors(),
            seed: 0,
        }
    }

    pub fn simple(target_size: usize) -> SampleSpec {
        SampleSpec {
            method: SampleMethod::Simple,
            target_size,
            fraud_ratio: 0.0,
            k_neighbors: default_k_neighbors(),
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> SampleSpec {
        self.seed = seed;
        self
    }

    /// Short display label, free of commas so it can sit in CSV cells.
    pub fn label(&self) -> String {
        match self.method {
            SampleMethod::Simple => format!("simple(n={})", self.target_size),
            SampleMethod::Undersample => format!("under(r={})", self.fraud_ratio),
            SampleMethod::Smote => format!(
                "smote(n={} r={} k={})",
                self.target_size, self.fraud_ratio, self.k_neighbors
            ),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ratio_ok = self.fraud_ratio > 0.0 && self.fraud_ratio < 1.0;
        match self.method {
            SampleMethod::Simple => {
                if self.target_size == 0 {
                    return Err(Error::Parameter("simple sample needs target_size >= 1".into()));
                }
            }
            SampleMethod::Undersample => {
                if !ratio_ok {
                    return Err(Error::Parameter(format!(
                        "fraud_ratio must lie in (0, 1), got {}",
                        self.fraud_ratio
                    )));
                }
            }
            SampleMethod::Smote => {
                if self.target_size == 0 {
                    return Err(Error::Parameter("SMOTE sample needs target_size >= 1".into()));
                }
                if !ratio_ok {
                    return Err(Error::Parameter(format!(
                        "fraud_ratio must lie in (0, 1), got {}",
                        self.fraud_ratio
                    )));
                }
                if self.k_neighbors == 0 {
                    return Err(Error::Parameter("k_neighbors must be >= 1".into()));
                }
            }
        }
        Ok(())
    }
}

/// A built training sample plus the pool records it did not consume.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    records: Vec<Transaction>,
    synthetic_flags: Vec<bool>,
    achieved_ratio: f64,
    leftover: Vec<Transaction>,
}

impl Sample {
    pub(crate) fn from_parts(
        records: Vec<Transaction>,
        synthetic_flags: Vec<bool>,
        leftover: Vec<Transaction>,
    ) -> Sample {
        debug_assert_eq!(records.len(), synthetic_flags.len());
        let fraud = records.iter().filter(|t| t.is_fraud()).count();
        let achieved_ratio = if records.is_empty() {
            0.0
        } else {
            fraud as f64 / records.len() as f64
        };
        Sample {
            records,
            synthetic_flags,
            achieved_ratio,
            leftover,
        }
    }

    pub fn records(&self) -> &[Transaction] {
        &self.records
    }

    /// Parallel to `records`; true only for SMOTE-generated entries.
    pub fn synthetic_flags(&self) -> &[bool] {
        &self.synthetic_flags
    }

    pub fn achieved_ratio(&self) -> f64 {
        self.achieved_ratio
    }

    /// Unconsumed real pool records, in pool order.
    pub fn leftover(&self) -> &[Transaction] {
        &self.leftover
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn fraud_count(&self) -> usize {
        self.records.iter().filter(|t| t.is_fraud()).count()
    }

    /// Debug dump in the dataset CSV schema plus a trailing `Synthetic`
    /// 0/1 column. Sample records only; leftovers are not written.
    pub fn write_debug_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(path.as_ref())?);
        write!(out, "Time")?;
        for i in 1..=FEATURE_COUNT {
            write!(out, ",V{i}")?;
        }
        writeln!(out, ",Amount,Class,Synthetic")?;
        for (t, synthetic) in self.records.iter().zip(&self.synthetic_flags) {
            write!(out, "{}", t.time())?;
            for v in t.features() {
                write!(out, ",{v}")?;
            }
            writeln!(
                out,
                ",{},{},{}",
                t.amount().to_decimal_string(),
                if t.is_fraud() { 1 } else { 0 },
                if *synthetic { 1 } else { 0 }
            )?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Builds the sample a spec describes, dispatching on its method.
pub fn build_sample(pool: &Dataset, spec: &SampleSpec) -> Result<Sample> {
    spec.validate()?;
    match spec.method {
        SampleMethod::Simple => simple_sample(pool, spec.target_size, spec.seed),
        SampleMethod::Undersample => undersample(pool, spec.fraud_ratio, spec.seed),
        SampleMethod::Smote => smote_sample(pool, spec),
    }
}

/// Keeps every fraud record and draws `round(f * (1 - r) / r)` majority
/// records uniformly without replacement, hitting `fraud_ratio` up to the
/// rounding of one record.
pub fn undersample(pool: &Dataset, fraud_ratio: f64, seed: u64) -> Result<Sample> {
    if !(fraud_ratio > 0.0 && fraud_ratio < 1.0) || !fraud_ratio.is_finite() {
        return Err(Error::Parameter(format!(
            "fraud_ratio must lie in (0, 1), got {fraud_ratio}"
        )));
    }
    let (frauds, majority) = split_by_class(pool);
    let f = frauds.len();
    if f == 0 {
        return Err(Error::Parameter("pool holds no fraud records".into()));
    }
    let m = (f as f64 * (1.0 - fraud_ratio) / fraud_ratio).round() as usize;
    if m > majority.len() {
        return Err(Error::InfeasibleRatio(format!(
            "ratio {fraud_ratio} needs {m} majority records, pool has {}",
            majority.len()
        )));
    }

    let mut rng = seeded_rng(seed);
    let picked = sorted_pick(&mut rng, majority.len(), m);

    let mut records: Vec<Transaction> = frauds.iter().map(|&t| t.clone()).collect();
    let mut leftover = Vec::with_capacity(majority.len() - m);
    extend_picked(&majority, &picked, &mut records, &mut leftover);
    let flags = vec![false; records.len()];
    Ok(Sample::from_parts(records, flags, leftover))
}

/// Draws `target_size` records uniformly without replacement, leaving the
/// class balance to chance.
pub fn simple_sample(pool: &Dataset, target_size: usize, seed: u64) -> Result<Sample> {
    if target_size == 0 {
        return Err(Error::Parameter("target_size must be >= 1".into()));
    }
    if target_size > pool.len() {
        return Err(Error::Parameter(format!(
            "target_size {target_size} exceeds pool size {}",
            pool.len()
        )));
    }
    let mut rng = seeded_rng(seed);
    let picked = sorted_pick(&mut rng, pool.len(), target_size);

    let all: Vec<&Transaction> = pool.records().iter().collect();
    let mut records = Vec::with_capacity(target_size);
    let mut leftover = Vec::with_capacity(pool.len() - target_size);
    extend_picked(&all, &picked, &mut records, &mut leftover);
    let flags = vec![false; records.len()];
    Ok(Sample::from_parts(records, flags, leftover))
}

/// Indices of the `k` minority records closest to `record` in Euclidean
/// distance over V1..V28 plus the z-scored amount. Ties break toward the
/// lower index. `minority` must not contain `record` itself.
pub fn knn_minority(
    record: &Transaction,
    minority: &[Transaction],
    k: usize,
) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::Parameter("k must be >= 1".into()));
    }
    if k > minority.len() {
        return Err(Error::Parameter(format!(
            "k = {k} exceeds the {} available minority records",
            minority.len()
        )));
    }
    let amount_scale = amount_stats(minority);
    let mut order: Vec<(f64, usize)> = minority
        .iter()
        .enumerate()
        .map(|(i, m)| (distance_sq(record, m, amount_scale), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(order[..k].iter().map(|&(_, i)| i).collect())
}

/// Mean and standard deviation of minority amounts in currency units, or
/// `None` when the amounts are constant — a constant column carries no
/// distance information and is dropped.
fn amount_stats(minority: &[Transaction]) -> Option<(f64, f64)> {
    let n = minority.len() as f64;
    let mean = minority.iter().map(|t| t.amount().as_units()).sum::<f64>() / n;
    let var = minority
        .iter()
        .map(|t| {
            let d = t.amount().as_units() - mean;
            d * d
        })
        .sum::<f64>()
        / n;
    let std = var.sqrt();
    (std > 1e-12).then_some((mean, std))
}

fn distance_sq(a: &Transaction, b: &Transaction, amount_scale: Option<(f64, f64)>) -> f64 {
    let mut sum = 0.0;
    for (x, y) in a.features().iter().zip(b.features().iter()) {
        let d = x - y;
        sum += d * d;
    }
    if let Some((mean, std)) = amount_scale {
        let d = (a.amount().as_units() - mean) / std - (b.amount().as_units() - mean) / std;
        sum += d * d;
    }
    sum
}

/// Interpolates `origin + c * (neighbor - origin)` across features, amount,
/// and time, labelling the result fraud. With `c` in [0, 1) every value
/// stays inside the segment between the two parents.
pub fn smote_synthesize(origin: &Transaction, neighbor: &Transaction, c: f64) -> Transaction {
    debug_assert!(origin.is_fraud() && neighbor.is_fraud());
    debug_assert!((0.0..1.0).contains(&c));
    let mut features = [0.0; FEATURE_COUNT];
    for (i, value) in features.iter_mut().enumerate() {
        let o = origin.features()[i];
        let n = neighbor.features()[i];
        *value = (o + c * (n - o)).clamp(o.min(n), o.max(n));
    }
    let o_micros = origin.amount().micros() as f64;
    let n_micros = neighbor.amount().micros() as f64;
    let amount_micros = (o_micros + c * (n_micros - o_micros))
        .round()
        .clamp(o_micros.min(n_micros), o_micros.max(n_micros)) as i64;
    let o_time = origin.time();
    let n_time = neighbor.time();
    let time = (o_time + c * (n_time - o_time)).clamp(o_time.min(n_time), o_time.max(n_time));
    Transaction::new(features, time, Money::from_micros(amount_micros), Label::Fraud)
        .expect("interpolants of valid records are valid")
}

/// Keeps every real fraud record, synthesizes minority records until the
/// fraud count reaches `round(target_size * fraud_ratio)`, then fills the
/// remainder with majority records drawn without replacement. Each
/// synthetic record uses a uniformly random origin, a uniformly random
/// pick among its `k_neighbors` nearest minority neighbours, and a fresh
/// interpolation ratio in [0, 1). When the pool already holds more fraud
/// records than the target asks for, nothing is synthesized and the
/// achieved ratio overshoots the request.
pub fn smote_sample(pool: &Dataset, spec: &SampleSpec) -> Result<Sample> {
    spec.validate()?;
    let (frauds, majority) = split_by_class(pool);
    let f = frauds.len();
    let k = spec.k_neighbors;
    if f < k + 1 {
        return Err(Error::Parameter(format!(
            "SMOTE with k = {k} needs at least {} fraud records, pool has {f}",
            k + 1
        )));
    }
    let target_fraud = (spec.target_size as f64 * spec.fraud_ratio).round() as usize;
    let synth_needed = target_fraud.saturating_sub(f);
    let fraud_total = f + synth_needed;
    if fraud_total > spec.target_size {
        return Err(Error::InfeasibleSpec(format!(
            "target_size {} is below the {f} real fraud records",
            spec.target_size
        )));
    }
    let majority_needed = spec.target_size - fraud_total;
    if majority_needed > majority.len() {
        return Err(Error::InfeasibleSpec(format!(
            "target_size {} needs {majority_needed} majority records, pool has {}",
            spec.target_size,
            majority.len()
        )));
    }

    let mut rng = seeded_rng(spec.seed);
    let mut records: Vec<Transaction> = frauds.iter().map(|&t| t.clone()).collect();
    let mut flags = vec![false; f];

    // Neighbour lists are fixed per origin, so cache them lazily.
    let fraud_owned: Vec<Transaction> = frauds.iter().map(|&t| t.clone()).collect();
    let mut neighbor_cache: Vec<Option<Vec<usize>>> = vec![None; f];
    for _ in 0..synth_needed {
        let oi = rng.gen_range(0..f);
        if neighbor_cache[oi].is_none() {
            let others: Vec<Transaction> = fraud_owned
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != oi)
                .map(|(_, t)| t.clone())
                .collect();
            let neighbors = knn_minority(&fraud_owned[oi], &others, k)?
                .into_iter()
                .map(|j| if j < oi { j } else { j + 1 })
                .collect();
            neighbor_cache[oi] = Some(neighbors);
        }
        let neighbors = neighbor_cache[oi].as_ref().expect("cache filled above");
        let ni = neighbors[rng.gen_range(0..k)];
        let c: f64 = rng.gen();
        records.push(smote_synthesize(&fraud_owned[oi], &fraud_owned[ni], c));
        flags.push(true);
    }

    let picked = sorted_pick(&mut rng, majority.len(), majority_needed);
    let mut leftover = Vec::with_capacity(majority.len() - majority_needed);
    extend_picked(&majority, &picked, &mut records, &mut leftover);
    flags.resize(records.len(), false);
    Ok(Sample::from_parts(records, flags, leftover))
}

fn split_by_class(pool: &Dataset) -> (Vec<&Transaction>, Vec<&Transaction>) {
    let mut frauds = Vec::with_capacity(pool.fraud_count());
    let mut majority = Vec::with_capacity(pool.len() - pool.fraud_count());
    for t in pool.records() {
        if t.is_fraud() {
            frauds.push(t);
        } else {
            majority.push(t);
        }
    }
    (frauds, majority)
}

fn sorted_pick(rng: &mut rand_chacha::ChaCha12Rng, len: usize, amount: usize) -> Vec<usize> {
    let mut picked = index::sample(rng, len, amount).into_vec();
    picked.sort_unstable();
    picked
}

/// Splits `source` into picked records (appended to `records`) and the
/// rest (appended to `leftover`), preserving source order in both.
fn extend_picked(
    source: &[&Transaction],
    picked: &[usize],
    records: &mut Vec<Transaction>,
    leftover: &mut Vec<Transaction>,
) {
    let mut next = picked.iter().copied().peekable();
    for (i, &t) in source.iter().enumerate() {
        if next.peek() == Some(&i) {
            next.next();
            records.push(t.clone());
        } else {
            leftover.push(t.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Dataset;

    fn pool(n: usize, fraud_rate: f64, seed: u64) -> Dataset {
        Dataset::synthetic(n, fraud_rate, seed).unwrap()
    }

    #[test]
    fn undersample_hits_requested_ratio() {
        let pool = pool(5_000, 0.01, 21);
        let sample = undersample(&pool, 0.3, 3).unwrap();
        let f = pool.fraud_count();
        assert_eq!(sample.fraud_count(), f);
        let achieved = sample.achieved_ratio();
        assert!(
            (achieved - 0.3).abs() <= 1.0 / sample.len() as f64,
            "achieved {achieved} for sample of {}",
            sample.len()
        );
        assert!(sample.synthetic_flags().iter().all(|&s| !s));
        // Sample plus leftover reconstruct the pool as a multiset.
        assert_eq!(sample.len() + sample.leftover().len(), pool.len());
    }

    #[test]
    fn undersample_rejects_infeasible_ratio() {
        let pool = pool(200, 0.4, 2);
        // 80 frauds at ratio 0.1 would need 720 majority records; only 120 exist.
        let err = undersample(&pool, 0.1, 1).unwrap_err();
        assert!(matches!(err, Error::InfeasibleRatio(_)), "got: {err}");
    }

    #[test]
    fn undersample_is_deterministic_per_seed() {
        let pool = pool(2_000, 0.02, 5);
        let a = undersample(&pool, 0.25, 11).unwrap();
        let b = undersample(&pool, 0.25, 11).unwrap();
        assert_eq!(a, b);
        let c = undersample(&pool, 0.25, 12).unwrap();
        assert_ne!(a.records(), c.records());
    }

    #[test]
    fn simple_sample_covers_pool_with_leftover() {
        let pool = pool(1_000, 0.05, 8);
        let sample = simple_sample(&pool, 250, 4).unwrap();
        assert_eq!(sample.len(), 250);
        assert_eq!(sample.leftover().len(), 750);
        let err = simple_sample(&pool, 1_001, 4).unwrap_err();
        assert!(matches!(err, Error::Parameter(_)), "got: {err}");
    }

    #[test]
    fn knn_matches_brute_force_oracle() {
        let pool = pool(400, 0.25, 31);
        let (frauds, _) = split_by_class(&pool);
        let owned: Vec<Transaction> = frauds.iter().map(|&t| t.clone()).collect();
        let record = owned[0].clone();
        let minority: Vec<Transaction> = owned[1..].to_vec();

        let got = knn_minority(&record, &minority, 7).unwrap();

        // Independent route: full pairwise distances, stable sort on
        // (distance, index), take the prefix.
        let scale = amount_stats(&minority);
        let mut pairs: Vec<(f64, usize)> = minority
            .iter()
            .enumerate()
            .map(|(i, m)| (distance_sq(&record, m, scale), i))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let expected: Vec<usize> = pairs[..7].iter().map(|&(_, i)| i).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn knn_validates_k() {
        let pool = pool(100, 0.3, 6);
        let (frauds, _) = split_by_class(&pool);
        let owned: Vec<Transaction> = frauds.iter().map(|&t| t.clone()).collect();
        assert!(knn_minority(&owned[0], &owned[1..], 0).is_err());
        assert!(knn_minority(&owned[0], &owned[1..], owned.len()).is_err());
    }

    #[test]
    fn synthesize_stays_on_the_segment() {
        let pool = pool(300, 0.3, 13);
        let (frauds, _) = split_by_class(&pool);
        let o = frauds[0];
        let n = frauds[1];
        for &c in &[0.0, 0.25, 0.9999] {
            let s = smote_synthesize(o, n, c);
            assert!(s.is_fraud());
            for i in 0..FEATURE_COUNT {
                let lo = o.features()[i].min(n.features()[i]);
                let hi = o.features()[i].max(n.features()[i]);
                assert!(s.features()[i] >= lo && s.features()[i] <= hi);
            }
            let lo = o.amount().min(n.amount());
            let hi = o.amount().max(n.amount());
            assert!(s.amount() >= lo && s.amount() <= hi);
        }
        // c = 0 reproduces the origin exactly.
        let s = smote_synthesize(o, n, 0.0);
        assert_eq!(s.features(), o.features());
        assert_eq!(s.amount(), o.amount());
    }

    #[test]
    fn smote_reaches_target_ratio_with_flags() {
        let pool = pool(4_000, 0.01, 17);
        let spec = SampleSpec::smote(1_000, 0.5).with_seed(19);
        let sample = smote_sample(&pool, &spec).unwrap();
        assert_eq!(sample.len(), 1_000);
        assert_eq!(sample.fraud_count(), 500);
        let synth = sample.synthetic_flags().iter().filter(|&&s| s).count();
        assert_eq!(synth, 500 - pool.fraud_count());
        // Real frauds all kept, flags only on synthetic entries.
        for (t, &flag) in sample.records().iter().zip(sample.synthetic_flags()) {
            if flag {
                assert!(t.is_fraud());
            }
        }
        assert!(
            (sample.achieved_ratio() - 0.5).abs() <= 1.0 / sample.len() as f64
        );
    }

    #[test]
    fn smote_synthetics_stay_in_fraud_bounding_box() {
        let pool = pool(2_000, 0.02, 23);
        let spec = SampleSpec::smote(600, 0.4).with_seed(29);
        let sample = smote_sample(&pool, &spec).unwrap();
        let (frauds, _) = split_by_class(&pool);
        let mut lo = [f64::INFINITY; FEATURE_COUNT];
        let mut hi = [f64::NEG_INFINITY; FEATURE_COUNT];
        for t in &frauds {
            for i in 0..FEATURE_COUNT {
                lo[i] = lo[i].min(t.features()[i]);
                hi[i] = hi[i].max(t.features()[i]);
            }
        }
        for (t, &flag) in sample.records().iter().zip(sample.synthetic_flags()) {
            if flag {
                for i in 0..FEATURE_COUNT {
                    assert!(t.features()[i] >= lo[i] && t.features()[i] <= hi[i]);
                }
            }
        }
    }

    #[test]
    fn smote_without_deficit_synthesizes_nothing() {
        let pool = pool(1_000, 0.2, 37);
        // 400 * 0.4 = 160 target frauds < 200 real frauds: every real fraud
        // is kept, nothing is synthesized, and the sample runs fraud-heavy.
        let spec = SampleSpec::smote(400, 0.4).with_seed(41);
        let sample = smote_sample(&pool, &spec).unwrap();
        assert_eq!(sample.len(), 400);
        assert_eq!(sample.fraud_count(), pool.fraud_count());
        assert!(sample.synthetic_flags().iter().all(|&s| !s));
    }

    #[test]
    fn smote_rejects_impossible_specs() {
        let pool = pool(1_000, 0.2, 43);
        // Target below the real minority count.
        let spec = SampleSpec::smote(100, 0.3).with_seed(1);
        assert!(matches!(
            smote_sample(&pool, &spec),
            Err(Error::InfeasibleSpec(_))
        ));
        // Majority demand beyond the pool: 1010 - 202 = 808 > 800 legit.
        let spec = SampleSpec::smote(1_010, 0.2).with_seed(1);
        assert!(matches!(
            smote_sample(&pool, &spec),
            Err(Error::InfeasibleSpec(_))
        ));
        // Too few frauds for the neighbour count.
        let small = pool_with_frauds(3);
        let spec = SampleSpec::smote(40, 0.5).with_seed(1);
        assert!(matches!(
            smote_sample(&small, &spec),
            Err(Error::Parameter(_))
        ));
    }

    fn pool_with_frauds(frauds: usize) -> Dataset {
        let mut records = Vec::new();
        for i in 0..50 {
            let mut features = [0.0; FEATURE_COUNT];
            features[0] = i as f64;
            let label = Label::from_fraud_flag(i < frauds);
            records.push(
                Transaction::new(features, i as f64, Money::from_units(10.0), label).unwrap(),
            );
        }
        Dataset::new(records)
    }

    #[test]
    fn build_sample_dispatches_and_is_deterministic() {
        let pool = pool(3_000, 0.02, 47);
        for spec in [
            SampleSpec::undersample(0.3).with_seed(7),
            SampleSpec::smote(500, 0.5).with_seed(7),
            SampleSpec::simple(200).with_seed(7),
        ] {
            let a = build_sample(&pool, &spec).unwrap();
            let b = build_sample(&pool, &spec).unwrap();
            assert_eq!(a, b, "method {:?}", spec.method);
        }
    }
}
