//! Monte-Carlo checks: the semigroup difference quotient and the increment axioms.

use std::time::Instant;

use rayon::prelude::*;

use super::report::{Status, VerificationReport};
use super::sampling::{tags, IncrementSampler, CHUNK};
use super::statistics::{ks_two_sample, pearson, spearman};
use crate::error::Result;
use crate::generator_ops::{ItoPlan, TestFunction};
use crate::levy_model::{make_preset, ProcessPreset};

/// Default time step of the difference quotient.
pub const DEFAULT_MC_TIME: f64 = 1e-3;
/// Bias allowance factor applied to `|D_t - D_{t/2}|`.
pub const BIAS_FACTOR: f64 = 4.0;
/// Sub-steps per interval when simulating paths.
pub const PATH_STEPS: usize = 8;
/// Two-sample KS critical coefficient at significance 0.01.
pub const KS_COEFFICIENT_01: f64 = 1.628;

#[derive(Debug, Clone, Copy)]
pub struct McOptions {
    pub t: f64,
    pub count: usize,
    pub seed: u64,
    /// Largest acceptable standard error; beyond it the status is inconclusive.
    pub stderr_budget: f64,
}

impl Default for McOptions {
    fn default() -> Self {
        Self {
            t: DEFAULT_MC_TIME,
            count: 1_000_000,
            seed: 0,
            stderr_budget: f64::INFINITY,
        }
    }
}

/// Mean and standard error of `(f(x + X) - f(x)) / t`.
fn difference_quotient(f: &dyn TestFunction, x: f64, samples: &[f64], t: f64) -> (f64, f64) {
    let f0 = f.value(x);
    let n = samples.len() as f64;
    let sum_over = |g: &(dyn Fn(f64) -> f64 + Sync)| -> f64 {
        samples
            .par_chunks(CHUNK)
            .map(|c| c.iter().map(|&y| g(y)).sum::<f64>())
            .collect::<Vec<_>>()
            .into_iter()
            .sum()
    };
    let mean = sum_over(&|y| f.value(x + y) - f0) / n;
    let var = sum_over(&|y| (f.value(x + y) - f0 - mean).powi(2)) / (n - 1.0).max(1.0);
    (mean / t, (var / n).sqrt() / t)
}

/// Estimates `D = (P_t f(x) - f(x)) / t` at each `x` and compares with the
/// Itô-form generator. A point passes when `|D - Lf(x)| <= 3 stderr + C t`,
/// with `C t` estimated as `BIAS_FACTOR |D_t - D_{t/2}|`. The reported error is
/// `|D - Lf| / (3 stderr + C t)` against tolerance 1.
pub fn mc_semigroup_check(
    preset: &ProcessPreset,
    f: &dyn TestFunction,
    xs: &[f64],
    opts: McOptions,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let triplet = make_preset(preset)?;
    let sampler = IncrementSampler::new(preset, opts.seed)?;
    let full = sampler.sample(opts.t, opts.count, tags::INCREMENT)?;
    let half = sampler.sample(0.5 * opts.t, opts.count, tags::HALF_STEP)?;
    let plan = ItoPlan::new(&triplet, f, f.length_scale() / 64.0)?;
    let mut report = VerificationReport::new(
        "mc_semigroup",
        format!(
            "{}, {}, t = {}, count = {}, seed = {}, streams (seed, tag << 40 | chunk) with chunk = {CHUNK}",
            sampler.preset,
            f.describe(),
            opts.t,
            opts.count,
            opts.seed
        ),
        &["x", "estimate", "stderr", "l_ito", "abs_error", "allowance", "pass"],
    );
    let mut errors = Vec::with_capacity(xs.len());
    let mut worst_stderr: f64 = 0.0;
    for &x in xs {
        let (d, se) = difference_quotient(f, x, &full, opts.t);
        let (d_half, _) = difference_quotient(f, x, &half, 0.5 * opts.t);
        let lf = plan.eval(&triplet, f, x)?;
        let abs_error = (d - lf).abs();
        let allowance = BIAS_FACTOR * (d - d_half).abs();
        let band = 3.0 * se + allowance;
        let err = if band > 0.0 {
            abs_error / band
        } else if abs_error <= 1e-12 * lf.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY
        };
        worst_stderr = worst_stderr.max(se);
        report.rows.push(vec![
            x,
            d,
            se,
            lf,
            abs_error,
            allowance,
            if err <= 1.0 { 1.0 } else { 0.0 },
        ]);
        errors.push(err);
    }
    report.metrics.insert("max_stderr".into(), worst_stderr);
    if worst_stderr > opts.stderr_budget {
        report.status = Status::Inconclusive;
        report.notes.push(format!(
            "standard error {worst_stderr:e} exceeds the budget {:e}",
            opts.stderr_budget
        ));
    }
    Ok(report.finish(&errors, 1.0, started))
}

/// Two-sample KS comparison of `X_{s+t} - X_s`, read off simulated paths, with
/// direct draws of `X_t`. The error is the KS statistic and the tolerance its
/// critical value at significance 0.01.
pub fn check_stationarity(sampler: &IncrementSampler, s: f64, t: f64, count: usize) -> Result<VerificationReport> {
    let started = Instant::now();
    let (_, increments) = sampler.sample_path_pairs(s, t, count, PATH_STEPS)?;
    let direct = sampler.sample(t, count, tags::INCREMENT)?;
    let (d, p) = ks_two_sample(&increments, &direct);
    let n = count as f64;
    let critical = KS_COEFFICIENT_01 * (2.0 * n / (n * n)).sqrt();
    let mut report = VerificationReport::new(
        "stationarity",
        format!(
            "{}, s = {s}, t = {t}, count = {count}, seed = {}",
            sampler.preset, sampler.seed
        ),
        &["ks_statistic", "p_value", "critical"],
    );
    report.rows.push(vec![d, p, critical]);
    report.metrics.insert("p_value".into(), p);
    Ok(report.finish(&[d], critical, started))
}

/// Correlation of `X_s` with the non-overlapping increment `X_{s+t} - X_s`,
/// bounded by `4/√count`. Heavy-tailed laws use the rank correlation.
pub fn check_independence(sampler: &IncrementSampler, s: f64, t: f64, count: usize) -> Result<VerificationReport> {
    let started = Instant::now();
    let (first, second) = sampler.sample_path_pairs(s, t, count, PATH_STEPS)?;
    let (name, r) = if sampler.is_heavy_tailed() {
        ("spearman", spearman(&first, &second))
    } else {
        ("pearson", pearson(&first, &second))
    };
    let bound = 4.0 / (count as f64).sqrt();
    let mut report = VerificationReport::new(
        "independence",
        format!(
            "{}, s = {s}, t = {t}, count = {count}, seed = {}, {name}",
            sampler.preset, sampler.seed
        ),
        &["correlation", "bound"],
    );
    report.rows.push(vec![r, bound]);
    Ok(report.finish(&[r.abs()], bound, started))
}
