//! Report emission: the per-iteration CSV, the aggregate JSON log, a
//! human-readable summary, and the GA/timing sidecars.
//!
//! `results.csv` and `master.json` are deterministic byte for byte for a
//! given config: floats render in shortest round-trip form, costs render
//! as exact decimals, and wall-clock data goes only to `timings.csv`.

use crate::error::{Error, Result};
use crate::evaluation::{ConfusionCounts, MetricSet, METRIC_NAMES};
use crate::harness::{summarize_combos, GaTraceRow, MasterLog, ResultRow, RunOutput, TimingRow};
use crate::money::Cost;
use crate::sampling::SampleMethod;
use std::fs;
use std::path::{Path, PathBuf};

/// Column order of `results.csv`.
pub const RESULT_COLUMNS: [&str; 27] = [
    "iteration",
    "method",
    "target_size",
    "fraud_ratio",
    "k_neighbors",
    "sample_seed",
    "sample_size",
    "achieved_ratio",
    "model",
    "control",
    "tp",
    "fp",
    "tn",
    "fn",
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
    "cost",
];

/// Files a finished report comprises.
#[derive(Clone, Debug)]
pub struct ReportPaths {
    pub results: PathBuf,
    pub master: PathBuf,
    pub summary: PathBuf,
    pub ga_trace: Option<PathBuf>,
    pub timings: PathBuf,
}

/// Writes the full report file set into `dir`, creating it if needed.
pub fn emit_report(output: &RunOutput, dir: &Path) -> Result<ReportPaths> {
    fs::create_dir_all(dir)?;
    let paths = ReportPaths {
        results: dir.join("results.csv"),
        master: dir.join("master.json"),
        summary: dir.join("summary.md"),
        ga_trace: output
            .master
            .config
            .ga
            .is_some()
            .then(|| dir.join("ga_trace.csv")),
        timings: dir.join("timings.csv"),
    };
    write_results_csv(&output.rows, &paths.results)?;
    write_master(&output.master, &paths.master)?;
    write_summary(&output.rows, &paths.summary)?;
    if let Some(trace_path) = &paths.ga_trace {
        write_ga_trace_csv(&output.ga_trace, trace_path)?;
    }
    write_timings_csv(&output.timings, &paths.timings)?;
    Ok(paths)
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub fn write_results_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(RESULT_COLUMNS)?;
    for row in rows {
        let m = row.metrics;
        writer.write_record([
            row.iteration.to_string(),
            row.method.name().to_string(),
            row.target_size.map(|n| n.to_string()).unwrap_or_default(),
            fmt_f64(row.fraud_ratio),
            row.k_neighbors.map(|k| k.to_string()).unwrap_or_default(),
            row.sample_seed.to_string(),
            row.sample_size.to_string(),
            fmt_f64(row.achieved_ratio),
            row.model.clone(),
            if row.control { "1" } else { "0" }.to_string(),
            row.counts.tp.to_string(),
            row.counts.fp.to_string(),
            row.counts.tn.to_string(),
            row.counts.fn_.to_string(),
            fmt_opt_f64(m.tpr),
            fmt_opt_f64(m.fpr),
            fmt_opt_f64(m.tnr),
            fmt_opt_f64(m.fnr),
            fmt_opt_f64(m.ppv),
            fmt_opt_f64(m.npv),
            fmt_opt_f64(m.fdr),
            fmt_opt_f64(m.for_),
            fmt_opt_f64(m.precision),
            fmt_opt_f64(m.recall),
            fmt_opt_f64(m.accuracy),
            fmt_opt_f64(m.f1),
            row.cost.to_decimal_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

fn parse_err(row: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        row,
        message: message.into(),
    }
}

fn cell<'a>(record: &'a csv::StringRecord, idx: usize, row: usize) -> Result<&'a str> {
    record
        .get(idx)
        .ok_or_else(|| parse_err(row, format!("missing column {}", RESULT_COLUMNS[idx])))
}

fn parse_num<T: std::str::FromStr>(text: &str, row: usize, what: &str) -> Result<T> {
    text.parse()
        .map_err(|_| parse_err(row, format!("bad {what}: {text:?}")))
}

fn parse_opt_num<T: std::str::FromStr>(text: &str, row: usize, what: &str) -> Result<Option<T>> {
    if text.is_empty() {
        Ok(None)
    } else {
        parse_num(text, row, what).map(Some)
    }
}

/// Reads rows written by [`write_results_csv`]. Wall times are not part
/// of the file, so they come back as zero.
pub fn read_results_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header = reader.headers()?.clone();
    if header.iter().ne(RESULT_COLUMNS) {
        return Err(Error::Schema(format!(
            "unexpected results.csv header: {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row_no = i + 2;
        let method = match cell(&record, 1, row_no)? {
            "simple" => SampleMethod::Simple,
            "under" => SampleMethod::Undersample,
            "smote" => SampleMethod::Smote,
            other => return Err(parse_err(row_no, format!("unknown method {other:?}"))),
        };
        let control = match cell(&record, 9, row_no)? {
            "0" => false,
            "1" => true,
            other => return Err(parse_err(row_no, format!("bad control flag {other:?}"))),
        };
        let cost_text = cell(&record, 26, row_no)?;
        let cost = Cost::parse_decimal(cost_text)
            .ok_or_else(|| parse_err(row_no, format!("bad cost: {cost_text:?}")))?;
        let mut metric_cells = [None; 12];
        for (k, slot) in metric_cells.iter_mut().enumerate() {
            *slot = parse_opt_num(cell(&record, 14 + k, row_no)?, row_no, METRIC_NAMES[k])?;
        }
        rows.push(ResultRow {
            iteration: parse_num(cell(&record, 0, row_no)?, row_no, "iteration")?,
            method,
            target_size: parse_opt_num(cell(&record, 2, row_no)?, row_no, "target_size")?,
            fraud_ratio: parse_num(cell(&record, 3, row_no)?, row_no, "fraud_ratio")?,
            k_neighbors: parse_opt_num(cell(&record, 4, row_no)?, row_no, "k_neighbors")?,
            sample_seed: parse_num(cell(&record, 5, row_no)?, row_no, "sample_seed")?,
            sample_size: parse_num(cell(&record, 6, row_no)?, row_no, "sample_size")?,
            achieved_ratio: parse_num(cell(&record, 7, row_no)?, row_no, "achieved_ratio")?,
            model: cell(&record, 8, row_no)?.to_string(),
            control,
            counts: ConfusionCounts::new(
                parse_num(cell(&record, 10, row_no)?, row_no, "tp")?,
                parse_num(cell(&record, 11, row_no)?, row_no, "fp")?,
                parse_num(cell(&record, 12, row_no)?, row_no, "tn")?,
                parse_num(cell(&record, 13, row_no)?, row_no, "fn")?,
            ),
            metrics: MetricSet {
                tpr: metric_cells[0],
                fpr: metric_cells[1],
                tnr: metric_cells[2],
                fnr: metric_cells[3],
                ppv: metric_cells[4],
                npv: metric_cells[5],
                fdr: metric_cells[6],
                for_: metric_cells[7],
                precision: metric_cells[8],
                recall: metric_cells[9],
                accuracy: metric_cells[10],
                f1: metric_cells[11],
            },
            cost,
            wall_ms: 0,
        });
    }
    Ok(rows)
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_master(master: &MasterLog, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(master)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_master(path: &Path) -> Result<MasterLog> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Markdown summary: one table per headline statistic, samples as rows
/// and models as columns, cells as `mean ± std` over iterations.
pub fn write_summary(rows: &[ResultRow], path: &Path) -> Result<()> {
    let combos = summarize_combos(rows);
    let mut samples: Vec<String> = Vec::new();
    let mut models: Vec<String> = Vec::new();
    for combo in &combos {
        if !samples.contains(&combo.sample) {
            samples.push(combo.sample.clone());
        }
        if !models.contains(&combo.model) {
            models.push(combo.model.clone());
        }
    }

    let lookup = |sample: &str, model: &str| {
        combos
            .iter()
            .find(|c| c.sample == sample && c.model == model)
    };
    let mut text = String::from("# Benchmark summary\n");
    if rows.is_empty() {
        text.push_str("\nNo result rows.\n");
        fs::write(path, text)?;
        return Ok(());
    }
    let iterations = combos.iter().map(|c| c.iterations).max().unwrap_or(0);
    text.push_str(&format!(
        "\n{} sample spec(s) x {} model(s), {} iteration(s).\n",
        samples.len(),
        models.len(),
        iterations
    ));

    let mut table = |title: &str, cell: &dyn Fn(&str, &str) -> String| {
        text.push_str(&format!("\n## {title}\n\n"));
        text.push_str(&format!("| Sample | {} |\n", models.join(" | ")));
        text.push_str(&format!("|---{}|\n", "|---".repeat(models.len())));
        for sample in &samples {
            let cells: Vec<String> = models.iter().map(|m| cell(sample, m)).collect();
            text.push_str(&format!("| {} | {} |\n", sample, cells.join(" | ")));
        }
    };

    table("Mean fraud cost (currency units)", &|sample, model| {
        lookup(sample, model)
            .map(|c| format!("{:.2} ± {:.2}", c.cost.mean, c.cost.std))
            .unwrap_or_else(|| "—".to_string())
    });
    table("Mean F1 (%)", &|sample, model| {
        lookup(sample, model)
            .and_then(|c| c.metrics.get("f1"))
            .map(|m| format!("{:.2} ± {:.2}", 100.0 * m.mean, 100.0 * m.std))
            .unwrap_or_else(|| "—".to_string())
    });
    table("Mean TPR (%)", &|sample, model| {
        lookup(sample, model)
            .and_then(|c| c.metrics.get("tpr"))
            .map(|m| format!("{:.2} ± {:.2}", 100.0 * m.mean, 100.0 * m.std))
            .unwrap_or_else(|| "—".to_string())
    });

    fs::write(path, text)?;
    Ok(())
}

pub fn write_ga_trace_csv(rows: &[GaTraceRow], path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record([
        "iteration",
        "sample",
        "generation",
        "best_cost",
        "mean_cost",
        "best_genome",
    ])?;
    for row in rows {
        let genome = row
            .best_genome
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        writer.write_record([
            row.iteration.to_string(),
            row.sample.clone(),
            row.generation.to_string(),
            row.best_cost.to_decimal_string(),
            fmt_f64(row.mean_cost_units),
            genome,
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_timings_csv(rows: &[TimingRow], path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["iteration", "sample", "model", "wall_ms"])?;
    for row in rows {
        writer.write_record([
            row.iteration.to_string(),
            row.sample.clone(),
            row.model.clone(),
            row.wall_ms.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::ClassifierSpec;
    use crate::harness::{run_test, DatasetSource, TestConfig};
    use crate::sampling::SampleSpec;

    fn small_run() -> RunOutput {
        let cfg = TestConfig {
            dataset: DatasetSource::Synthetic {
                records: 3_000,
                fraud_rate: 0.02,
            },
            samples: vec![SampleSpec::undersample(0.3), SampleSpec::smote(400, 0.2)],
            classifiers: vec![ClassifierSpec::Gnb, ClassifierSpec::knn(3)],
            mc_iterations: 2,
            master_seed: 7,
            ..TestConfig::default()
        };
        run_test(&cfg).unwrap()
    }

    #[test]
    fn results_csv_round_trips_exactly() {
        let out = small_run();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.csv");
        write_results_csv(&out.rows, &path).unwrap();
        let back = read_results_csv(&path).unwrap();
        assert_eq!(back.len(), out.rows.len());
        for (a, b) in out.rows.iter().zip(&back) {
            let mut a = a.clone();
            a.wall_ms = 0;
            assert_eq!(&a, b);
        }
    }

    #[test]
    fn empty_results_csv_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.csv");
        write_results_csv(&[], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("iteration,method,"));
        assert!(read_results_csv(&path).unwrap().is_empty());
    }

    #[test]
    fn read_rejects_foreign_headers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("other.csv");
        std::fs::write(&path, "a,b,c\n1,2,3\n").unwrap();
        assert!(matches!(
            read_results_csv(&path),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn report_writes_the_full_file_set() {
        let out = small_run();
        let dir = tempfile::tempdir().unwrap();
        let paths = emit_report(&out, dir.path()).unwrap();
        assert!(paths.results.is_file());
        assert!(paths.master.is_file());
        assert!(paths.summary.is_file());
        assert!(paths.ga_trace.is_none(), "no GA stage configured");
        assert!(paths.timings.is_file());

        let master_text = std::fs::read_to_string(&paths.master).unwrap();
        assert!(master_text.ends_with('\n'));
        let master = read_master(&paths.master).unwrap();
        assert_eq!(master, out.master);

        let summary = std::fs::read_to_string(&paths.summary).unwrap();
        assert!(summary.contains("Mean fraud cost"));
        assert!(summary.contains("under(r=0.3)"));
        assert!(summary.contains("GNB"));
        assert!(summary.contains("±"));
    }

    #[test]
    fn summary_for_no_rows_says_so() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("summary.md");
        write_summary(&[], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("No result rows."));
    }
}
