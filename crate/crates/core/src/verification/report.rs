use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Statistical budget not met; neither pass nor fail.
    Inconclusive,
}

/// Outcome of one check: a table, an error summary and a verdict.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub inputs: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub max_error: f64,
    pub mean_error: f64,
    pub tolerance: f64,
    /// `max_error <= tolerance`.
    pub pass: bool,
    pub status: Status,
    pub metrics: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub runtime_seconds: f64,
}

impl VerificationReport {
    pub(crate) fn new(check_name: &str, inputs: String, columns: &[&str]) -> Self {
        Self {
            check_name: check_name.to_string(),
            inputs,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            max_error: 0.0,
            mean_error: 0.0,
            tolerance: 0.0,
            pass: true,
            status: Status::Pass,
            metrics: BTreeMap::new(),
            notes: Vec::new(),
            runtime_seconds: 0.0,
        }
    }

    /// Sets the error summary from per-item errors and derives the verdict.
    pub(crate) fn finish(mut self, errors: &[f64], tolerance: f64, started: Instant) -> Self {
        self.max_error = errors
            .iter()
            .copied()
            .fold(0.0, |m, e| if e.is_nan() { f64::NAN } else { m.max(e) });
        self.mean_error = if errors.is_empty() {
            0.0
        } else {
            errors.iter().sum::<f64>() / errors.len() as f64
        };
        self.tolerance = tolerance;
        self.pass = self.max_error <= tolerance;
        if self.status != Status::Inconclusive {
            self.status = if self.pass { Status::Pass } else { Status::Fail };
        }
        self.runtime_seconds = started.elapsed().as_secs_f64();
        self
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}
