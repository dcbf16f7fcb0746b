//! Execution of single jobs into a JSON document and a CSV table.

use std::fmt::Write as _;
use std::time::Instant;

use levygen_core::generator_ops::TestFunction;
use levygen_core::tail_kernels::{assemble_kernel, k_minus, k_plus, mu_minus, mu_plus};
use levygen_core::verification::{
    check_limit_theorems, check_monotonicity, compare_forms, log_spaced, mc_semigroup_check, McOptions,
    MonotonicityOptions, Status, VerificationReport, DEFAULT_LADDER_DEPTH, DEFAULT_MC_TIME, FORMS_TOLERANCE,
};
use levygen_core::{char_exponent, make_preset, LevyMeasure};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Job, JobKind};
use crate::error::CliError;

pub const CSV_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JobStatus {
    Pass,
    Fail,
    Inconclusive,
    /// The job aborted with an error.
    Error,
}

impl JobStatus {
    pub fn is_failure(self) -> bool {
        matches!(self, JobStatus::Fail | JobStatus::Error)
    }
}

/// Everything a job produces; `runtimes` are kept apart so that the rest is reproducible.
#[derive(Debug, Clone)]
pub struct JobOutput {
    pub name: String,
    pub status: JobStatus,
    pub reports: Vec<VerificationReport>,
    pub summary: Value,
    pub csv_columns: Vec<&'static str>,
    pub csv_rows: Vec<Vec<f64>>,
    pub error: Option<String>,
    pub runtime_seconds: f64,
}

impl JobOutput {
    pub fn csv(&self) -> String {
        let mut s = format!("# schema={CSV_SCHEMA}\n{}\n", self.csv_columns.join(","));
        for row in &self.csv_rows {
            let cells: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    /// JSON report; everything outside `timestamp` depends only on the configuration.
    pub fn json(&self, job: &Job, unix_seconds: u64) -> Result<String, CliError> {
        let mut reports = Vec::new();
        let mut runtimes = serde_json::Map::new();
        for r in &self.reports {
            let mut v = serde_json::to_value(r)?;
            if let Some(obj) = v.as_object_mut() {
                obj.remove("runtime_seconds");
            }
            runtimes.insert(r.check_name.clone(), json!(r.runtime_seconds));
            reports.push(v);
        }
        runtimes.insert("total".into(), json!(self.runtime_seconds));
        let doc = json!({
            "schema": CSV_SCHEMA,
            "tool": { "name": "levygen", "version": env!("CARGO_PKG_VERSION"), "core_version": levygen_core::VERSION },
            "job": self.name,
            "kind": job.kind,
            "status": self.status,
            "seed": job.seed,
            "config": job,
            "summary": self.summary,
            "reports": reports,
            "csv_columns": self.csv_columns,
            "error": self.error,
            "timestamp": { "unix_seconds": unix_seconds, "runtime_seconds": runtimes },
        });
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }
}

/// Shortest round-trip representation, scientific outside `[1e-4, 1e15)`.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn columns(kind: JobKind) -> Vec<&'static str> {
    match kind {
        JobKind::CompareForms => vec!["x", "L_ito", "L_conv", "L_spec", "abs_diff"],
        JobKind::TheoremChecks => vec!["m", "eps", "eps2_mu_minus", "eps2_mu_plus", "eps_k_minus", "eps_k_plus"],
        JobKind::ExponentSweep => vec!["z", "re_lambda", "im_lambda"],
        JobKind::KernelTable => vec!["u", "mu", "k", "kernel_total"],
        JobKind::McSemigroup => vec!["x", "estimate", "stderr", "l_ito", "abs_error", "allowance", "pass"],
    }
}

/// Runs one job; numerical failures become a job with status `error`.
pub fn run_job(name: &str, job: &Job) -> JobOutput {
    let started = Instant::now();
    let mut out = JobOutput {
        name: name.to_string(),
        status: JobStatus::Pass,
        reports: Vec::new(),
        summary: Value::Null,
        csv_columns: columns(job.kind),
        csv_rows: Vec::new(),
        error: None,
        runtime_seconds: 0.0,
    };
    if let Err(e) = execute(job, &mut out) {
        out.status = JobStatus::Error;
        out.error = Some(e.to_string());
        out.csv_rows.clear();
    }
    out.runtime_seconds = started.elapsed().as_secs_f64();
    out
}

fn status_of(reports: &[VerificationReport]) -> JobStatus {
    if reports.iter().any(|r| r.status == Status::Fail) {
        JobStatus::Fail
    } else if reports.iter().any(|r| r.status == Status::Inconclusive) {
        JobStatus::Inconclusive
    } else {
        JobStatus::Pass
    }
}

/// Strict monotonicity holds where the density is positive on both half-lines.
pub fn strict_monotonicity(m: &LevyMeasure) -> bool {
    !m.is_empty() && m.atoms().is_empty() && [-4.0, -1e-4, 1e-4, 4.0].iter().all(|&x| m.density(x) > 0.0)
}

/// Magnitudes used for the monotonicity suite.
pub fn monotonicity_points() -> Vec<f64> {
    log_spaced(1e-4, 4.0, 64)
}

fn execute(job: &Job, out: &mut JobOutput) -> Result<(), CliError> {
    let preset = job.process();
    let triplet = make_preset(&preset)?;
    match job.kind {
        JobKind::CompareForms => {
            let f = job.test_function();
            let grids = job.grids();
            let c = compare_forms(
                &triplet,
                &[&f as &dyn TestFunction],
                &grids,
                job.tolerance.unwrap_or(FORMS_TOLERANCE),
            )?;
            let finest = &c.finest[0];
            let grid = grids.last().expect("nonempty ladder");
            for (i, x) in grid.nodes().into_iter().enumerate() {
                let (a, b, s) = (
                    finest.ito.values[i],
                    finest.convolution.values[i],
                    finest.spectral.values[i],
                );
                out.csv_rows.push(vec![x, a, b, s, (b - a).abs().max((s - a).abs())]);
            }
            out.summary = json!({ "preset": preset.label(), "family": f.describe() });
            out.reports.push(c.report);
        }
        JobKind::TheoremChecks => {
            let m = &triplet.measure;
            let limits = check_limit_theorems(m, job.m_max.unwrap_or(DEFAULT_LADDER_DEPTH))?;
            let strict = strict_monotonicity(m);
            let mono = check_monotonicity(m, &monotonicity_points(), MonotonicityOptions { strict })?;
            out.csv_rows = limits.rows.clone();
            out.summary = json!({ "preset": preset.label(), "strict_monotonicity": strict });
            out.reports.push(limits);
            out.reports.push(mono);
        }
        JobKind::ExponentSweep => {
            let range = job.range.unwrap_or(20.0);
            let points = job.points.unwrap_or(201).max(2);
            let mut min_re = f64::INFINITY;
            for i in 0..points {
                let z = -range + 2.0 * range * i as f64 / (points - 1) as f64;
                let l = char_exponent(&triplet, z)?;
                min_re = min_re.min(l.re / l.norm().max(1.0));
                out.csv_rows.push(vec![z, l.re, l.im]);
            }
            // Re λ >= 0 up to rounding.
            let ok = min_re >= -1e-10;
            out.summary =
                json!({ "preset": preset.label(), "min_relative_re_lambda": min_re, "nonnegative_real_part": ok });
            if !ok {
                out.status = JobStatus::Fail;
            }
            return Ok(());
        }
        JobKind::KernelTable => {
            let range = job.range.unwrap_or(2.0);
            let half = (job.points.unwrap_or(128) / 2).max(2);
            let k = assemble_kernel(&triplet)?;
            let m = &triplet.measure;
            let mags = log_spaced(1e-3 * range, range, half);
            let us = mags.iter().rev().map(|v| -v).chain(mags.iter().copied());
            let mut finite = true;
            for u in us {
                let (mu, kv) = if u < 0.0 {
                    (mu_minus(m, u)?, k_minus(m, u)?)
                } else {
                    (mu_plus(m, u)?, k_plus(m, u)?)
                };
                let total = k.eval(u)?;
                finite &= mu.is_finite() && kv.is_finite() && total.is_finite();
                out.csv_rows.push(vec![u, mu, kv, total]);
            }
            out.summary = json!({
                "preset": preset.label(),
                "gamma_correction": k.gamma_correction,
                "drift_coefficient": k.drift_coefficient,
                "singular_exponent": k.singular_exponent(),
                "finite": finite,
            });
            if !finite {
                out.status = JobStatus::Fail;
            }
            return Ok(());
        }
        JobKind::McSemigroup => {
            let f = job.test_function();
            let p = &job.family_params;
            let xs = job.x.clone().unwrap_or_else(|| {
                [-0.5, -0.25, 0.0, 0.25, 0.5]
                    .iter()
                    .map(|r| p.center + r * p.width)
                    .collect()
            });
            let opts = McOptions {
                t: job.t.unwrap_or(DEFAULT_MC_TIME),
                count: job.count.unwrap_or(1_000_000),
                seed: job.seed,
                stderr_budget: job.stderr_budget.unwrap_or(f64::INFINITY),
            };
            let r = mc_semigroup_check(&preset, &f, &xs, opts)?;
            out.csv_rows = r.rows.clone();
            out.summary = json!({ "preset": preset.label(), "family": f.describe() });
            out.reports.push(r);
        }
    }
    out.status = status_of(&out.reports);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, -20.0, 1.5e-68, 0.1, 123456.789, -3.2e17, f64::MIN_POSITIVE] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_number(1.5e-68), "1.5e-68");
        assert_eq!(format_number(-20.0), "-20");
    }
}
