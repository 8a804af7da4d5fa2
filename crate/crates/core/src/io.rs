//! Reading and writing distributions and channels.
//!
//! JSON: a distribution is an array of numbers and a channel an array of rows.
//! CSV: one row per input symbol. A distribution is a single row, or a
//! single column with one probability per line. An optional header row is
//! detected by its first field not parsing as a number.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::prob::{Channel, ProbVector};
use crate::report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// `.csv` selects CSV; anything else is read as JSON.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

fn check_entries(rows: &[Vec<f64>]) -> Result<()> {
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v.is_nan() {
                return Err(Error::Parse(format!("NaN at row {i}, column {j}")));
            }
            if v < 0.0 {
                return Err(Error::Parse(format!("negative entry {v} at row {i}, column {j}")));
            }
            if v.is_infinite() {
                return Err(Error::Parse(format!("infinite entry at row {i}, column {j}")));
            }
        }
    }
    Ok(())
}

fn parse_csv_matrix(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if i == 0 => continue,
            Err(e) => return Err(Error::Parse(format!("row {i}: {e}"))),
        }
    }
    check_entries(&rows)?;
    Ok(rows)
}

fn parse_json_matrix(text: &str) -> Result<Vec<Vec<f64>>> {
    let rows: Vec<Vec<f64>> = report::from_json(text)?;
    check_entries(&rows)?;
    Ok(rows)
}

pub fn parse_distribution(text: &str, format: Format) -> Result<ProbVector> {
    let mass = match format {
        Format::Json => {
            let mass: Vec<f64> = report::from_json(text)?;
            check_entries(std::slice::from_ref(&mass))?;
            mass
        }
        Format::Csv => {
            let rows = parse_csv_matrix(text)?;
            match rows.as_slice() {
                [row] => row.clone(),
                rows if rows.iter().all(|r| r.len() == 1) => rows.iter().map(|r| r[0]).collect(),
                _ => return Err(Error::Parse("expected a single row or a single column".into())),
            }
        }
    };
    ProbVector::new(mass)
}

pub fn parse_channel(text: &str, format: Format) -> Result<Channel> {
    let rows = match format {
        Format::Json => parse_json_matrix(text)?,
        Format::Csv => parse_csv_matrix(text)?,
    };
    Channel::new(rows)
}

pub fn read_distribution(path: &Path) -> Result<ProbVector> {
    parse_distribution(&fs::read_to_string(path)?, Format::from_path(path))
}

pub fn read_channel(path: &Path) -> Result<Channel> {
    parse_channel(&fs::read_to_string(path)?, Format::from_path(path))
}

fn csv_header(width: usize) -> Vec<String> {
    (0..width).map(|z| format!("z{z}")).collect()
}

fn csv_rows<'a>(width: usize, rows: impl Iterator<Item = &'a [f64]>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(csv_header(width))
        .map_err(|e| Error::Io(e.to_string()))?;
    for row in rows {
        w.write_record(row.iter().map(|v| format!("{v:.16e}")))
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// CSV with a `z0,z1,…` header and one row per input symbol.
pub fn channel_to_csv(k: &Channel) -> Result<String> {
    csv_rows(k.outputs(), k.rows().iter().map(|r| r.as_slice()))
}

pub fn distribution_to_csv(p: &ProbVector) -> Result<String> {
    csv_rows(p.dim(), std::iter::once(p.as_slice()))
}

pub fn channel_to_json(k: &Channel) -> Result<String> {
    report::to_json(k)
}

pub fn distribution_to_json(p: &ProbVector) -> Result<String> {
    report::to_json(p)
}

/// Writes `k` in the format implied by the extension of `path`.
pub fn write_channel(path: &Path, k: &Channel) -> Result<()> {
    let text = match Format::from_path(path) {
        Format::Json => channel_to_json(k)?,
        Format::Csv => channel_to_csv(k)?,
    };
    fs::write(path, text)?;
    Ok(())
}
