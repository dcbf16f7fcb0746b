//! Limit relations and monotonicity of the tail and kernel functions.

use std::time::Instant;

use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::levy_model::{LevyMeasure, Side};
use crate::quadrature::{self, Tolerance};
use crate::tail_kernels::{k_minus, k_plus, mu_minus, mu_plus};

/// Default ladder depth; deeper ladders run into underflow of `ε²` terms.
pub const DEFAULT_LADDER_DEPTH: u32 = 20;
/// Required decay of every ladder between `m = 1` and `m = m_max`.
pub const LADDER_DECAY: f64 = 1e-3;
const PAIR_TOLERANCE: f64 = 1e-12;

/// Access to `μ±` and `k±`; implemented by [`LevyMeasure`] and by test doubles.
pub trait TailKernelSource {
    /// `μ_-(x)` for `side = Minus` (x < 0), `μ_+(x)` for `Plus` (x > 0).
    fn mu(&self, side: Side, x: f64) -> Result<f64>;
    fn kernel(&self, side: Side, x: f64) -> Result<f64>;
    fn describe(&self) -> String;
}

impl TailKernelSource for LevyMeasure {
    fn mu(&self, side: Side, x: f64) -> Result<f64> {
        match side {
            Side::Minus => mu_minus(self, x),
            Side::Plus => mu_plus(self, x),
        }
    }

    fn kernel(&self, side: Side, x: f64) -> Result<f64> {
        match side {
            Side::Minus => k_minus(self, x),
            Side::Plus => k_plus(self, x),
        }
    }

    fn describe(&self) -> String {
        format!("{:?} atoms={:?}", self.components(), self.atoms())
    }
}

/// Whether the tail `m >= m_max/2` of the ladder is nonincreasing.
fn eventually_decreasing(s: &[f64]) -> bool {
    let start = s.len() / 2;
    s[start..].windows(2).all(|w| w[1] <= w[0])
}

/// Tabulates `ε²|μ_±(±ε)|` and `ε|k_±(±ε)|` along `ε = 2^{-m}`, `m = 1..m_max`, and
/// confirms finiteness of `∫_{-1}^0 k_-`, `∫_0^1 k_+`, `∫_{-1}^0 |x μ_-(x)| dx`
/// and `∫_0^1 |x μ_+(x)| dx`.
///
/// Each ladder contributes the error `last/first` when it is eventually
/// decreasing and `+inf` otherwise; the tolerance is [`LADDER_DECAY`].
pub fn check_limit_theorems(m: &LevyMeasure, m_max: u32) -> Result<VerificationReport> {
    let started = Instant::now();
    if m_max < 2 {
        return Err(Error::Parameter {
            field: "m_max".into(),
            value: f64::from(m_max),
            bound: "m_max >= 2".into(),
        });
    }
    let mut report = VerificationReport::new(
        "theorem_checks",
        format!("ladder ε = 2^-m, m = 1..{m_max}; measure {}", m.describe()),
        &["m", "eps", "eps2_mu_minus", "eps2_mu_plus", "eps_k_minus", "eps_k_plus"],
    );
    for k in 1..=m_max {
        let eps = 2f64.powi(-(k as i32));
        report.rows.push(vec![
            f64::from(k),
            eps,
            eps * eps * mu_minus(m, -eps)?.abs(),
            eps * eps * mu_plus(m, eps)?.abs(),
            eps * k_minus(m, -eps)?.abs(),
            eps * k_plus(m, eps)?.abs(),
        ]);
    }
    let mut errors = Vec::new();
    for name in ["eps2_mu_minus", "eps2_mu_plus", "eps_k_minus", "eps_k_plus"] {
        let s = report.column(name).expect("known column");
        let ratio = if s[0] == 0.0 { 0.0 } else { s[s.len() - 1] / s[0] };
        let decreasing = eventually_decreasing(&s);
        report.metrics.insert(format!("{name}_ratio"), ratio);
        report
            .metrics
            .insert(format!("{name}_eventually_decreasing"), f64::from(u8::from(decreasing)));
        errors.push(if decreasing { ratio } else { f64::INFINITY });
    }

    let tol = Tolerance::DEFAULT;
    for side in [Side::Minus, Side::Plus] {
        let s = side.sign();
        let (k_int, _) = quadrature::integrate_log_from_zero(
            |v| m.kernel(side, s * v).unwrap_or(f64::NAN),
            1.0,
            tol,
            "∫ k over (0, 1]",
        )
        .map_err(|e| integrability("∫ k over the unit interval", e))?;
        let (mom, _) = quadrature::integrate_log_from_zero(
            |v| v * m.mu(side, s * v).unwrap_or(f64::NAN).abs(),
            1.0,
            tol,
            "∫ |x μ(x)|",
        )
        .map_err(|e| integrability("∫ |x μ(x)| over the unit interval", e))?;
        for (what, v) in [("kernel_integral", k_int), ("moment_integral", mom)] {
            if !v.is_finite() {
                return Err(Error::Integrability {
                    what: format!("{what} ({side:?})"),
                    value: v,
                });
            }
            let key = match side {
                Side::Minus => format!("{what}_minus"),
                Side::Plus => format!("{what}_plus"),
            };
            report.metrics.insert(key, v);
        }
    }
    Ok(report.finish(&errors, LADDER_DECAY, started))
}

fn integrability(what: &str, e: Error) -> Error {
    match e {
        Error::NumericalFailure { achieved, .. } => Error::Integrability {
            what: what.to_string(),
            value: achieved,
        },
        other => other,
    }
}

/// `count` points `lo · (hi/lo)^{i/(count-1)}`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let r = (hi / lo).ln();
    (0..count)
        .map(|i| lo * (r * i as f64 / (count.max(2) - 1) as f64).exp())
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MonotonicityOptions {
    /// Require strict monotonicity of `μ±` everywhere and of `k±` inside `(-1, 1)`.
    pub strict: bool,
}

/// Checks that `μ_-`, `μ_+`, `k_-` increase and `k_+` decreases on the given
/// magnitudes (mirrored to both half-lines), together with `μ_- >= 0`,
/// `μ_+ <= 0`, `k_- >= 0` on `[-1, 0)` and `k_+ >= 0` on `(0, 1]`. The error is
/// the number of violations; the tolerance is 0.
pub fn check_monotonicity(
    src: &dyn TailKernelSource,
    magnitudes: &[f64],
    opts: MonotonicityOptions,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut report = VerificationReport::new(
        "monotonicity",
        format!(
            "{} points, strict = {}; {}",
            magnitudes.len(),
            opts.strict,
            src.describe()
        ),
        &["x", "mu", "k"],
    );
    let mut v: Vec<f64> = magnitudes
        .iter()
        .copied()
        .filter(|v| *v > 0.0 && v.is_finite())
        .collect();
    v.sort_by(f64::total_cmp);
    v.dedup();

    // Up to ten located violations per kind: sign and ordering.
    let mut violations = 0usize;
    let mut shown = [0usize; 2];
    let mut note = |report: &mut VerificationReport, kind: usize, msg: String| {
        violations += 1;
        if shown[kind] < 10 {
            shown[kind] += 1;
            report.notes.push(msg);
        }
    };

    for side in [Side::Minus, Side::Plus] {
        // Points in increasing x.
        let xs: Vec<f64> = match side {
            Side::Minus => v.iter().rev().map(|m| -m).collect(),
            Side::Plus => v.clone(),
        };
        let mut mus = Vec::with_capacity(xs.len());
        let mut ks = Vec::with_capacity(xs.len());
        for &x in &xs {
            let mu = src.mu(side, x)?;
            let k = src.kernel(side, x)?;
            report.rows.push(vec![x, mu, k]);
            mus.push(mu);
            ks.push(k);
            let mu_ok = match side {
                Side::Minus => mu >= 0.0,
                Side::Plus => mu <= 0.0,
            };
            if !mu_ok {
                note(&mut report, 0, format!("sign of μ violated at x = {x}: {mu}"));
            }
            if x.abs() <= 1.0 && k < 0.0 {
                note(&mut report, 0, format!("k < 0 at x = {x}: {k}"));
            }
        }
        // k_+ decreases; everything else increases in x.
        let k_dir = if side == Side::Plus { -1.0 } else { 1.0 };
        for i in 1..xs.len() {
            let (a, b) = (xs[i - 1], xs[i]);
            let slack = |p: f64, q: f64| PAIR_TOLERANCE * p.abs().max(q.abs()).max(1.0);
            let dmu = mus[i] - mus[i - 1];
            let dk = k_dir * (ks[i] - ks[i - 1]);
            if dmu < -slack(mus[i], mus[i - 1]) || (opts.strict && dmu <= 0.0) {
                note(
                    &mut report,
                    1,
                    format!("μ not increasing between x = {a} and {b}: {} -> {}", mus[i - 1], mus[i]),
                );
            }
            let inside = a.abs() < 1.0 && b.abs() < 1.0;
            if dk < -slack(ks[i], ks[i - 1]) || (opts.strict && inside && dk <= 0.0) {
                let which = if side == Side::Plus { "decreasing" } else { "increasing" };
                note(
                    &mut report,
                    1,
                    format!("k not {which} between x = {a} and {b}: {} -> {}", ks[i - 1], ks[i]),
                );
            }
        }
    }
    let errors = [violations as f64];
    report.metrics.insert("violations".into(), violations as f64);
    Ok(report.finish(&errors, 0.0, started))
}
