//! Series and summary outputs.
//!
//! A series is a list of `(t, k, value)` rows written as CSV with a leading
//! comment line carrying the config hash. Floats are printed in the shortest
//! form that parses back to the same bits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, Result};

/// One `(t, k, value)` row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    /// Time or sample label.
    pub t: f64,
    /// Mode, gap or eigenvalue index.
    pub k: usize,
    /// Recorded value.
    pub value: f64,
}

/// A named series destined for one CSV file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Series {
    /// File stem.
    pub name: String,
    /// Rows in output order.
    pub rows: Vec<Row>,
}

impl Series {
    /// Empty series with the given file stem.
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            rows: Vec::new(),
        }
    }

    /// Appends a row.
    pub fn push(&mut self, t: f64, k: usize, value: f64) {
        self.rows.push(Row { t, k, value });
    }

    /// Appends `values[i]` at index `offset + i` for every `i`.
    pub fn push_all(&mut self, t: f64, offset: usize, values: &[f64]) {
        for (i, &v) in values.iter().enumerate() {
            self.push(t, offset + i, v);
        }
    }

    /// CSV text with the hash comment and header.
    pub fn to_csv(&self, config_hash: &str) -> String {
        let mut out = String::with_capacity(32 * (self.rows.len() + 2));
        let _ = writeln!(out, "# config-hash: sha256:{config_hash}");
        out.push_str("t,k,value\n");
        for r in &self.rows {
            let _ = writeln!(out, "{:e},{},{:e}", r.t, r.k, r.value);
        }
        out
    }

    /// Parses text produced by [`Series::to_csv`], returning the hash and series.
    pub fn from_csv(name: &str, text: &str) -> Option<(String, Self)> {
        let mut lines = text.lines();
        let hash = lines.next()?.strip_prefix("# config-hash: sha256:")?.to_string();
        if lines.next()? != "t,k,value" {
            return None;
        }
        let mut series = Series::new(name);
        for line in lines {
            let mut parts = line.split(',');
            let t = parts.next()?.parse().ok()?;
            let k = parts.next()?.parse().ok()?;
            let value = parts.next()?.parse().ok()?;
            if parts.next().is_some() {
                return None;
            }
            series.push(t, k, value);
        }
        Some((hash, series))
    }
}

/// Everything an experiment produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    /// Summary JSON (fitted quantities, verdicts and the config echo).
    pub summary: serde_json::Value,
    /// Series files.
    pub series: Vec<Series>,
    /// Whether the run's own checks passed (always true for measurements).
    pub passed: bool,
}

impl RunOutput {
    /// Wraps a typed summary together with the config echo and hash.
    pub fn new<S: Serialize>(summary: &S, config_json: &str, config_hash: &str, series: Vec<Series>) -> Self {
        let config: serde_json::Value = serde_json::from_str(config_json).expect("canonical config is JSON");
        let summary = serde_json::json!({
            "config_hash": config_hash,
            "config": config,
            "results": serde_json::to_value(summary).expect("summary serialises"),
        });
        Self {
            summary,
            series,
            passed: true,
        }
    }

    /// Writes `<stem>.json` and one CSV per series into `dir`, returning the
    /// paths written.
    pub fn write(&self, dir: &Path, stem: &str, config_hash: &str) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        let mut written = Vec::new();
        let json_path = dir.join(format!("{stem}.json"));
        let text = serde_json::to_string_pretty(&self.summary).expect("summary serialises") + "\n";
        std::fs::write(&json_path, text).map_err(|e| io_error(&json_path, e))?;
        written.push(json_path);
        for s in &self.series {
            let path = dir.join(format!("{}.csv", s.name));
            std::fs::write(&path, s.to_csv(config_hash)).map_err(|e| io_error(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}

fn io_error(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}
