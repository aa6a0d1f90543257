//! CSV reading and writing for the `Time,V1..V28,Amount,Class` schema.
//!
//! Files are UTF-8 with LF line endings. Floats are written with Rust's
//! shortest round-trip formatting and amounts as exact decimals, so a
//! written file reloads to an identical dataset.

use super::{Dataset, Label, Transaction, FEATURE_COUNT};
use crate::error::{Error, Result};
use crate::money::Money;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

const COLUMNS: usize = FEATURE_COUNT + 3;

fn expected_header() -> Vec<String> {
    let mut header = Vec::with_capacity(COLUMNS);
    header.push("Time".to_string());
    header.extend((1..=FEATURE_COUNT).map(|i| format!("V{i}")));
    header.push("Amount".to_string());
    header.push("Class".to_string());
    header
}

pub(super) fn load(path: &Path) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)?;

    let expected = expected_header();
    let header: Vec<String> = reader
        .headers()?
        .iter()
        .map(|f| f.trim().to_string())
        .collect();
    check_header(&header, &expected)?;

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| Error::Parse {
            row: row_no,
            message: e.to_string(),
        })?;
        if row.len() != COLUMNS {
            return Err(Error::Parse {
                row: row_no,
                message: format!("expected {COLUMNS} fields, found {}", row.len()),
            });
        }
        let time = parse_field(&row[0], row_no, "Time")?;
        let mut features = [0.0; FEATURE_COUNT];
        for (j, feature) in features.iter_mut().enumerate() {
            *feature = parse_field(&row[j + 1], row_no, &format!("V{}", j + 1))?;
        }
        let amount_units = parse_field(&row[FEATURE_COUNT + 1], row_no, "Amount")?;
        if amount_units < 0.0 {
            return Err(Error::Parse {
                row: row_no,
                message: format!("Amount must be non-negative, got {amount_units}"),
            });
        }
        let label = parse_class(&row[FEATURE_COUNT + 2], row_no)?;
        let record = Transaction::new(features, time, Money::from_units(amount_units), label)
            .map_err(|e| Error::Parse {
                row: row_no,
                message: e.to_string(),
            })?;
        records.push(record);
    }

    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(Dataset::new(records))
}

fn check_header(header: &[String], expected: &[String]) -> Result<()> {
    for name in expected {
        if !header.iter().any(|h| h == name) {
            return Err(Error::Schema(format!("missing column {name}")));
        }
    }
    for name in header {
        if !expected.iter().any(|e| e == name) {
            return Err(Error::Schema(format!("unexpected column {name}")));
        }
    }
    if header != expected {
        return Err(Error::Schema(format!(
            "columns out of order: expected {}, got {}",
            expected.join(","),
            header.join(",")
        )));
    }
    Ok(())
}

fn parse_field(text: &str, row: usize, column: &str) -> Result<f64> {
    let value: f64 = text.trim().parse().map_err(|_| Error::Parse {
        row,
        message: format!("column {column}: cannot parse {text:?} as a number"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse {
            row,
            message: format!("column {column}: value is not finite"),
        });
    }
    Ok(value)
}

fn parse_class(text: &str, row: usize) -> Result<Label> {
    match text.trim() {
        "0" => Ok(Label::Legit),
        "1" => Ok(Label::Fraud),
        other => match other.parse::<f64>() {
            Ok(v) if v == 0.0 => Ok(Label::Legit),
            Ok(v) if v == 1.0 => Ok(Label::Fraud),
            _ => Err(Error::Parse {
                row,
                message: format!("column Class: expected 0 or 1, got {text:?}"),
            }),
        },
    }
}

pub(super) fn write(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{}", expected_header().join(","))?;
    for t in dataset.records() {
        write!(out, "{}", t.time())?;
        for v in t.features() {
            write!(out, ",{v}")?;
        }
        let class = if t.is_fraud() { 1 } else { 0 };
        writeln!(out, ",{},{class}", t.amount().to_decimal_string())?;
    }
    out.flush()?;
    Ok(())
}
