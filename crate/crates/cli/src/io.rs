//! Reading and writing the three input formats.

use std::fs;
use std::path::Path;

use clap::ValueEnum;
use lulu::discrete::Signal;
use lulu::PLFunction;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    /// `x,y` rows, read as the continuous linear interpolant.
    CsvXy,
    /// One value per row, a discrete sequence.
    CsvSeq,
    /// Exact piecewise-linear function with jumps.
    JsonPl,
}

pub enum Data {
    Function(PLFunction),
    Sequence(Signal),
}

pub struct Loaded {
    pub data: Data,
    pub sha256: String,
}

pub fn load(path: &Path, format: Format, spacing: f64) -> Result<Loaded, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| CliError::Malformed("input is not UTF-8".into()))?;
    let data = match format {
        Format::CsvXy => Data::Function(parse_xy(&text)?),
        Format::CsvSeq => Data::Sequence(parse_seq(&text, spacing)?),
        Format::JsonPl => Data::Function(
            serde_json::from_str(&text).map_err(|e| CliError::Malformed(format!("json-pl: {e}")))?,
        ),
    };
    Ok(Loaded { data, sha256 })
}

/// Numeric rows; a first row that does not parse is taken as a header.
fn numeric_rows(text: &str, width: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = vec![];
    for (k, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Malformed(format!("csv: {e}")))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) if v.len() == width => rows.push(v),
            Err(_) if k == 0 => continue,
            _ => {
                return Err(CliError::Malformed(format!(
                    "row {}: expected {width} numeric field(s)",
                    k + 1
                )))
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Malformed("no data rows".into()));
    }
    Ok(rows)
}

fn parse_xy(text: &str) -> Result<PLFunction, CliError> {
    let points: Vec<(f64, f64)> = numeric_rows(text, 2)?.into_iter().map(|r| (r[0], r[1])).collect();
    if points.len() < 2 {
        return Err(CliError::Malformed("csv-xy needs at least two points".into()));
    }
    PLFunction::from_points(&points).map_err(|e| CliError::Malformed(e.to_string()))
}

fn parse_seq(text: &str, spacing: f64) -> Result<Signal, CliError> {
    let samples = numeric_rows(text, 1)?.into_iter().map(|r| r[0]).collect();
    Signal::with_spacing(samples, spacing).map_err(|e| CliError::Malformed(e.to_string()))
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Unwritable(format!("{}: {e}", path.display())))
}

/// Breakpoint values as `x,y` rows. Side limits are not representable, so a
/// function with jumps only keeps its point values.
pub fn to_xy(f: &PLFunction) -> String {
    let mut out = String::from("x,y\n");
    for (x, v) in f.breakpoints().iter().zip(f.values()) {
        out.push_str(&format!("{x},{v}\n"));
    }
    out
}

pub fn to_seq(s: &Signal) -> String {
    let mut out = String::new();
    for v in s.samples() {
        out.push_str(&format!("{v}\n"));
    }
    out
}

pub fn to_json(f: &PLFunction) -> String {
    let mut s = serde_json::to_string_pretty(f).expect("functions serialize");
    s.push('\n');
    s
}
