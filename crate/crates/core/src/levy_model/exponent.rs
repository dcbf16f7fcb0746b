//! The Levy-Khinchine exponent `λ(z) = ½Az² - iγz - ∫(e^{ixz} - 1 - ixz 1_{|x|<1}) ν(dx)`.

use num_complex::Complex64;

use super::measure::{LevyMeasure, Side};
use super::triplet::LevyTriplet;
use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};

/// Which evaluation path [`char_exponent_with`] takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentRoute {
    /// Closed forms for preset components, quadrature for the rest.
    Auto,
    /// Quadrature for every density component.
    Quadrature,
}

const TAYLOR_REMAINDER: f64 = 1e-11;
const MAX_OSCILLATIONS: usize = 20_000;

/// `λ(z)` with closed forms wherever the measure provides them.
pub fn char_exponent(t: &LevyTriplet, z: f64) -> Result<Complex64> {
    char_exponent_with(t, z, ExponentRoute::Auto)
}

pub fn char_exponent_with(t: &LevyTriplet, z: f64, route: ExponentRoute) -> Result<Complex64> {
    let i = Complex64::i();
    let local = Complex64::new(0.5 * t.diffusion * z * z, 0.0) - i * t.gamma * z;
    Ok(local - jump_integral(&t.measure, z, route)?)
}

/// `∫(e^{ixz} - 1 - ixz 1_{|x|<1}) ν(dx)`; atoms at `|x| = 1` are compensated.
pub fn jump_integral(m: &LevyMeasure, z: f64, route: ExponentRoute) -> Result<Complex64> {
    if z == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let i = Complex64::i();
    let mut total = Complex64::new(0.0, 0.0);
    for a in m.atoms() {
        let s = a.location;
        let comp = if s.abs() <= 1.0 { s * z } else { 0.0 };
        total += a.mass * ((i * s * z).exp() - 1.0 - i * comp);
    }
    let numeric: Vec<_> = match route {
        ExponentRoute::Auto => {
            let mut rest = Vec::new();
            for c in m.components() {
                match c.jump_integral_closed_form(z) {
                    Some(v) => total += v,
                    None => rest.push(c.clone()),
                }
            }
            rest
        }
        ExponentRoute::Quadrature => m.components().to_vec(),
    };
    if !numeric.is_empty() {
        let sub = LevyMeasure::new(numeric, Vec::new())?;
        total += density_jump_integral(&sub, z)?;
    }
    Ok(total)
}

/// Quadrature route for the density part of `m` (atoms are ignored here).
fn density_jump_integral(m: &LevyMeasure, z: f64) -> Result<Complex64> {
    let az = z.abs();

    // |x| < δ: second-order Taylor term with third-order remainder control.
    let mut delta = 1.0_f64.min(1.0 / az);
    let mut m2 = m.second_moment_near_zero(delta)?;
    let mut halvings = 0;
    while az.powi(3) * delta * m2 / 6.0 > TAYLOR_REMAINDER {
        delta *= 0.5;
        m2 = m.second_moment_near_zero(delta)?;
        halvings += 1;
        if halvings > 200 {
            return Err(Error::NumericalFailure {
                what: "near-zero split of the exponent".into(),
                achieved: az.powi(3) * delta * m2 / 6.0,
                requested: TAYLOR_REMAINDER,
            });
        }
    }
    let mut re = -0.5 * z * z * m2;
    let mut im = 0.0;

    // δ <= |x| < 1 in the variable ln|x|.
    if delta < 1.0 {
        let q = quadrature::integrate_n(
            |s| {
                let x = s.exp();
                let (dp, dm) = (m.density(x), m.density(-x));
                let u = x * z;
                [x * cos_minus_one(u) * (dp + dm), x * sin_minus_identity(u) * (dp - dm)]
            },
            delta.ln(),
            0.0,
            Tolerance::new(1e-12, 1e-10),
            "exponent integrand on δ <= |x| < 1",
        )?;
        re += q.value[0];
        im += q.value[1];
    }

    // |x| >= 1: non-oscillatory mass term exactly, oscillatory part by half periods.
    re -= m.density_tail(Side::Minus, 1.0)? + m.density_tail(Side::Plus, 1.0)?;
    let (c, s) = oscillatory_tail(m, z)?;
    re += c;
    im += s;
    Ok(Complex64::new(re, im))
}

fn cos_minus_one(u: f64) -> f64 {
    let h = (0.5 * u).sin();
    -2.0 * h * h
}

fn sin_minus_identity(u: f64) -> f64 {
    if u.abs() < 0.1 {
        let u2 = u * u;
        -u * u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0 * (1.0 - u2 / 72.0)))
    } else {
        u.sin() - u
    }
}

/// `(∫_1^∞ cos(xz)(ν(x)+ν(-x)) dx, ∫_1^∞ sin(xz)(ν(x)-ν(-x)) dx)` summed over
/// half periods and accelerated by repeated averaging.
fn oscillatory_tail(m: &LevyMeasure, z: f64) -> Result<(f64, f64)> {
    let step = std::f64::consts::PI / z.abs();
    let mut sums_c: Vec<f64> = Vec::new();
    let mut sums_s: Vec<f64> = Vec::new();
    let (mut acc_c, mut acc_s) = (0.0, 0.0);
    let mut last_estimate: Option<(f64, f64)> = None;
    let tol = 1e-12;
    for k in 0..MAX_OSCILLATIONS {
        let a = 1.0 + k as f64 * step;
        let b = a + step;
        let q = quadrature::integrate_n(
            |x| {
                let (dp, dm) = (m.density(x), m.density(-x));
                let (sn, cs) = (x * z).sin_cos();
                [cs * (dp + dm), sn * (dp - dm)]
            },
            a,
            b,
            Tolerance::new(1e-14, 1e-12),
            "oscillatory exponent tail",
        )?;
        acc_c += q.value[0];
        acc_s += q.value[1];
        sums_c.push(acc_c);
        sums_s.push(acc_s);
        let term = q.value[0].abs().max(q.value[1].abs());
        if term == 0.0 || (term < 1e-17 && k > 2) {
            return Ok((acc_c, acc_s));
        }
        if k >= 12 {
            let window = sums_c.len().min(24);
            let est = (
                quadrature::repeated_average(&sums_c[sums_c.len() - window..]),
                quadrature::repeated_average(&sums_s[sums_s.len() - window..]),
            );
            if let Some(prev) = last_estimate {
                if (est.0 - prev.0).abs() < tol && (est.1 - prev.1).abs() < tol {
                    return Ok(est);
                }
            }
            last_estimate = Some(est);
        }
    }
    Err(Error::NumericalFailure {
        what: "oscillatory exponent tail".into(),
        achieved: f64::NAN,
        requested: tol,
    })
}
