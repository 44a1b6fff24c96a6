use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::config::{ExperimentConfig, ExperimentKind, Format};

pub const SCHEMA_VERSION: u32 = 1;

/// Columns after the sweep key, in output order.
pub const COLUMNS: [&str; 8] =
    ["value", "location", "normalizer", "normalized", "bound", "bound_satisfied", "aux", "error"];

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Record {
    pub key: f64,
    pub value: Option<f64>,
    pub location: Option<f64>,
    pub normalizer: Option<f64>,
    pub normalized: Option<f64>,
    pub bound: Option<f64>,
    pub bound_satisfied: Option<bool>,
    pub aux: Option<f64>,
    pub error: Option<String>,
}

impl Record {
    pub fn new(key: f64) -> Self {
        Record { key, ..Default::default() }
    }

    pub fn failed(key: f64, err: &Error) -> Self {
        Record { key, error: Some(err.to_string()), ..Default::default() }
    }

    /// Sets value and, when the normalizer is positive, the normalized value.
    pub fn normalize(&mut self, normalizer: Option<f64>) {
        self.normalizer = normalizer.filter(|n| n.is_finite() && *n > 0.0);
        self.normalized = match (self.value, self.normalizer) {
            (Some(v), Some(n)) => Some(v / n),
            _ => None,
        };
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub crate_version: String,
    /// Wall-clock time per record, in record order.
    pub timings_ms: Vec<f64>,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: ExperimentKind,
    pub key_name: String,
    pub config: ExperimentConfig,
    pub header: ReportHeader,
    pub records: Vec<Record>,
}

impl ExperimentReport {
    /// True when no record failed an asserted bound and none errored.
    pub fn all_satisfied(&self) -> bool {
        self.records.iter().all(|r| r.bound_satisfied != Some(false) && r.error.is_none())
    }

    pub fn violations(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.bound_satisfied == Some(false) || r.error.is_some())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io { path: "<csv>".into(), message: e.to_string() };
        let mut header = vec![self.key_name.as_str()];
        header.extend(COLUMNS);
        w.write_record(&header).map_err(csv_err)?;
        let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.records {
            w.write_record([
                r.key.to_string(),
                num(r.value),
                num(r.location),
                num(r.normalizer),
                num(r.normalized),
                num(r.bound),
                r.bound_satisfied.map(|b| b.to_string()).unwrap_or_default(),
                num(r.aux),
                r.error.clone().unwrap_or_default(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io { path: "<csv>".into(), message: e.to_string() })?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io { path: "<json>".into(), message: e.to_string() })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Writes the report to `path`.
pub fn emit(report: &ExperimentReport, format: Format, path: &Path) -> Result<()> {
    let text = report.render(format)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
