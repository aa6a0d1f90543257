//! Command-line front end: `run` a configured Monte Carlo benchmark,
//! `search` sample and classifier grids, or `report` from saved rows.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fraudbench::classifiers::{ClassifierSpec, Penalty};
use fraudbench::ensemble::GaConfig;
use fraudbench::harness::report::{emit_report, read_results_csv, write_summary};
use fraudbench::harness::search::{bootstrap_search, SearchConfig};
use fraudbench::harness::{run_test, DatasetSource, EnsembleSection, TestConfig};
use fraudbench::sampling::SampleSpec;
use std::fs;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "fraudbench", version, about = "Cost-sensitive fraud-detection benchmarking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo benchmark and write the report files.
    Run(RunArgs),
    /// Search the sample and classifier grids from a config file.
    Search(SearchArgs),
    /// Re-render the summary from a saved results.csv.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum MethodArg {
    Simple,
    Under,
    Smote,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum ModelArg {
    Log,
    Svc,
    Rf,
    Gnb,
    Knn,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum PenaltyArg {
    L1,
    L2,
}

impl From<PenaltyArg> for Penalty {
    fn from(arg: PenaltyArg) -> Penalty {
        match arg {
            PenaltyArg::L1 => Penalty::L1,
            PenaltyArg::L2 => Penalty::L2,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file with the full test description; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Transaction CSV to benchmark on.
    #[arg(long, conflicts_with = "synthetic")]
    data: Option<PathBuf>,
    /// Generated table instead of a file, as `RECORDS,FRAUD_RATE`.
    #[arg(long, value_name = "N,RATE")]
    synthetic: Option<String>,
    /// Sampling method for a single-sample run.
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Sample target size (simple and smote).
    #[arg(long)]
    size: Option<usize>,
    /// Sample fraud ratio (under and smote).
    #[arg(long)]
    ratio: Option<f64>,
    /// Classifier to run; repeat for several.
    #[arg(long, value_enum)]
    model: Vec<ModelArg>,
    /// Regularization penalty for log and svc models.
    #[arg(long, value_enum)]
    penalty: Option<PenaltyArg>,
    /// Regularization strength for log and svc models.
    #[arg(long)]
    c: Option<f64>,
    /// Tree count for rf models.
    #[arg(long)]
    trees: Option<usize>,
    /// Neighbour count for knn models.
    #[arg(long)]
    k: Option<usize>,
    /// Monte Carlo iteration count.
    #[arg(long)]
    iters: Option<usize>,
    /// Master seed; everything else derives from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Add the weighted voting ensemble to every sample.
    #[arg(long)]
    ensemble: bool,
    /// Ensemble weight-search time budget in seconds.
    #[arg(long, conflicts_with = "ga_generations")]
    ga_seconds: Option<f64>,
    /// Ensemble weight-search generation count (deterministic mode).
    #[arg(long)]
    ga_generations: Option<u64>,
    /// Output directory for the report files.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// JSON config file with the grids; defaults to the full built-in grids.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Where to write search.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// A results.csv produced by `run`.
    #[arg(long)]
    rows: PathBuf,
    /// Output directory; defaults to the directory holding the rows.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_synthetic(text: &str) -> Result<DatasetSource> {
    let (records, rate) = text
        .split_once(',')
        .context("--synthetic expects RECORDS,FRAUD_RATE, e.g. 50000,0.004")?;
    Ok(DatasetSource::Synthetic {
        records: records.trim().parse().context("bad synthetic record count")?,
        fraud_rate: rate.trim().parse().context("bad synthetic fraud rate")?,
    })
}

fn build_sample_spec(args: &RunArgs) -> Result<Option<SampleSpec>> {
    let Some(method) = args.method else {
        if args.size.is_some() || args.ratio.is_some() {
            bail!("--size/--ratio need --method");
        }
        return Ok(None);
    };
    let spec = match method {
        MethodArg::Simple => {
            let size = args.size.context("--method simple needs --size")?;
            SampleSpec::simple(size)
        }
        MethodArg::Under => {
            let ratio = args.ratio.context("--method under needs --ratio")?;
            SampleSpec::undersample(ratio)
        }
        MethodArg::Smote => {
            let size = args.size.context("--method smote needs --size")?;
            let ratio = args.ratio.context("--method smote needs --ratio")?;
            SampleSpec::smote(size, ratio)
        }
    };
    Ok(Some(spec))
}

fn build_classifier_specs(args: &RunArgs) -> Vec<ClassifierSpec> {
    let penalty = args.penalty.map(Penalty::from).unwrap_or(Penalty::L2);
    let c_value = args.c.unwrap_or(1.0);
    args.model
        .iter()
        .map(|m| match m {
            ModelArg::Log => ClassifierSpec::log(penalty, c_value),
            ModelArg::Svc => ClassifierSpec::svc(penalty, c_value),
            ModelArg::Rf => ClassifierSpec::rf(args.trees.unwrap_or(100)),
            ModelArg::Gnb => ClassifierSpec::Gnb,
            ModelArg::Knn => ClassifierSpec::knn(args.k.unwrap_or(5)),
        })
        .collect()
}

fn load_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
}

fn run(args: RunArgs) -> Result<()> {
    let mut cfg: TestConfig = match &args.config {
        Some(path) => load_json(path)?,
        None => TestConfig::default(),
    };
    if let Some(path) = &args.data {
        cfg.dataset = DatasetSource::Path(path.clone());
    }
    if let Some(text) = &args.synthetic {
        cfg.dataset = parse_synthetic(text)?;
    }
    if let Some(spec) = build_sample_spec(&args)? {
        cfg.samples = vec![spec];
    }
    if !args.model.is_empty() {
        cfg.classifiers = build_classifier_specs(&args);
    }
    if let Some(iters) = args.iters {
        cfg.mc_iterations = iters;
    }
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if args.ensemble && cfg.ga.is_none() {
        cfg.ga = Some(EnsembleSection::default());
    }
    if args.ga_seconds.is_some() || args.ga_generations.is_some() {
        let section = cfg.ga.get_or_insert_with(EnsembleSection::default);
        if let Some(secs) = args.ga_seconds {
            section.config = GaConfig {
                time_budget_secs: secs,
                generations: None,
                ..section.config.clone()
            };
        }
        if let Some(gens) = args.ga_generations {
            section.config = GaConfig {
                generations: Some(gens),
                ..section.config.clone()
            };
        }
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }

    let output = run_test(&cfg).map_err(anyhow::Error::from)?;
    let paths = emit_report(&output, &cfg.output_dir)?;
    println!(
        "{} rows over {} iteration(s) -> {}",
        output.rows.len(),
        cfg.mc_iterations,
        paths.results.display()
    );
    if let Some(best) = &output.master.best_cost {
        println!(
            "lowest mean cost: {:.2} for {} on {}",
            best.value, best.model, best.sample
        );
    }
    Ok(())
}

fn search(args: SearchArgs) -> Result<()> {
    let cfg: SearchConfig = match &args.config {
        Some(path) => load_json(path)?,
        None => SearchConfig::default(),
    };
    let outcome = bootstrap_search(&cfg).map_err(anyhow::Error::from)?;
    println!(
        "best sample: {} (converged: {}, rounds: {})",
        outcome.best_sample.label(),
        outcome.converged,
        outcome.rounds
    );
    for spec in &outcome.best_classifiers {
        println!("best parameters: {}", spec.label());
    }
    for kind in &outcome.dropped {
        println!("dropped family: {kind}");
    }
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        let path = dir.join("search.json");
        let mut text = serde_json::to_string_pretty(&outcome)?;
        text.push('\n');
        fs::write(&path, text)?;
        println!("search outcome -> {}", path.display());
    }
    Ok(())
}

fn report(args: ReportArgs) -> Result<()> {
    let rows = read_results_csv(&args.rows).map_err(anyhow::Error::from)?;
    let dir = match &args.out {
        Some(dir) => dir.clone(),
        None => args
            .rows
            .parent()
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(".")),
    };
    fs::create_dir_all(&dir)?;
    let path = dir.join("summary.md");
    write_summary(&rows, &path)?;
    println!("{} rows -> {}", rows.len(), path.display());
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => run(args),
        Command::Search(args) => search(args),
        Command::Report(args) => report(args),
    }
}
