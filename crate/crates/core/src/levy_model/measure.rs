//! Levy measures: absolutely continuous components plus finitely many atoms.
//!
//! Every query is answered per half-line. Preset components carry closed
//! forms for tail masses and truncated moments; `Density` and tempered
//! components fall back to adaptive quadrature in logarithmic variables.

use std::fmt;
use std::sync::Arc;

use libm::{erfc, tgamma as gamma};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};

/// Half-line selector: `Minus` is `(-inf, 0)`, `Plus` is `(0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Minus => -1.0,
            Side::Plus => 1.0,
        }
    }

    pub fn of(x: f64) -> Side {
        if x < 0.0 {
            Side::Minus
        } else {
            Side::Plus
        }
    }
}

pub type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One absolutely continuous piece of a Levy measure.
#[derive(Clone)]
pub enum JumpComponent {
    /// `rate` times the normal density with the given mean and standard deviation.
    Gaussian { rate: f64, mean: f64, sd: f64 },
    /// `rate` times a two-sided exponential law: upward jumps with probability
    /// `p_up`, both sides with mean magnitude `scale`.
    BilateralExponential { rate: f64, p_up: f64, scale: f64 },
    /// `c |x|^{-1-alpha}`.
    SymmetricStable { c: f64, alpha: f64 },
    /// `c exp(-theta |x|) |x|^{-1-alpha}`.
    TemperedStable { c: f64, alpha: f64, theta: f64 },
    /// Arbitrary nonnegative density with `density(x) = O(|x|^{-1-order})` at 0.
    Density {
        label: String,
        density: DensityFn,
        near_zero_order: f64,
    },
}

impl fmt::Debug for JumpComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gaussian { rate, mean, sd } => write!(f, "Gaussian(rate={rate}, mean={mean}, sd={sd})"),
            Self::BilateralExponential { rate, p_up, scale } => {
                write!(f, "BilateralExponential(rate={rate}, p_up={p_up}, scale={scale})")
            }
            Self::SymmetricStable { c, alpha } => write!(f, "SymmetricStable(c={c}, alpha={alpha})"),
            Self::TemperedStable { c, alpha, theta } => {
                write!(f, "TemperedStable(c={c}, alpha={alpha}, theta={theta})")
            }
            Self::Density {
                label, near_zero_order, ..
            } => {
                write!(f, "Density({label}, order={near_zero_order})")
            }
        }
    }
}

/// Point mass `mass` at `location != 0`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Upper normal tail `P(Z > z)`.
fn normal_q(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// Lower incomplete gamma `∫_0^u v^q e^{-v} dv` for integer `q >= 0`.
fn lower_gamma_int(q: u32, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let fact: f64 = (1..=q).map(f64::from).product();
    if u < 1.0 {
        // u^{q+1} Σ (-u)^k / (k! (q+1+k))
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 0..60 {
            let t = term / (f64::from(q) + 1.0 + k as f64);
            sum += t;
            if t.abs() < 1e-18 * sum.abs() {
                break;
            }
            term *= -u / (k as f64 + 1.0);
        }
        u.powi(q as i32 + 1) * sum
    } else {
        let mut partial = 0.0;
        let mut term = 1.0;
        for k in 0..=q {
            if k > 0 {
                term *= u / f64::from(k);
            }
            partial += term;
        }
        fact * (1.0 - (-u).exp() * partial)
    }
}

/// Density of one component restricted to one half-line, in the magnitude
/// variable `t = |x| > 0`.
enum HalfLaw<'a> {
    Gaussian {
        rate: f64,
        mean: f64,
        sd: f64,
    },
    Exponential {
        rate: f64,
        scale: f64,
    },
    Power {
        c: f64,
        alpha: f64,
    },
    Tempered {
        c: f64,
        alpha: f64,
        theta: f64,
    },
    Custom {
        density: &'a DensityFn,
        mirror: bool,
        label: &'a str,
    },
}

impl HalfLaw<'_> {
    fn density(&self, t: f64) -> f64 {
        match *self {
            HalfLaw::Gaussian { rate, mean, sd } => rate * std_normal_pdf((t - mean) / sd) / sd,
            HalfLaw::Exponential { rate, scale } => rate / scale * (-t / scale).exp(),
            HalfLaw::Power { c, alpha } => c * t.powf(-1.0 - alpha),
            HalfLaw::Tempered { c, alpha, theta } => c * (-theta * t).exp() * t.powf(-1.0 - alpha),
            HalfLaw::Custom { density, mirror, .. } => density(if mirror { -t } else { t }),
        }
    }

    /// `∫_t^∞ density`.
    fn tail(&self, t: f64) -> Result<f64> {
        match *self {
            HalfLaw::Gaussian { rate, mean, sd } => Ok(rate * normal_q((t - mean) / sd)),
            HalfLaw::Exponential { rate, scale } => Ok(rate * (-t / scale).exp()),
            HalfLaw::Power { c, alpha } => Ok(c / alpha * t.powf(-alpha)),
            HalfLaw::Tempered { c, alpha, .. } if self.untempered() => Ok(c / alpha * t.powf(-alpha)),
            HalfLaw::Tempered { c, alpha, theta } if theta * t < 1.0 => {
                // Power-law part in closed form; the correction c s^{-1-α}(e^{-θs} - 1)
                // is one order less singular.
                let (corr, _) = quadrature::integrate_log_to_infinity(
                    |s| c * s.powf(-1.0 - alpha) * (-theta * s).exp_m1(),
                    t,
                    Tolerance::KERNEL,
                    &self.what("tail mass"),
                )?;
                Ok(c / alpha * t.powf(-alpha) + corr)
            }
            _ => self.quad_tail(t),
        }
    }

    /// A tempered law with `θ = 0` is a pure power law.
    fn untempered(&self) -> bool {
        matches!(*self, HalfLaw::Tempered { theta, .. } if theta == 0.0)
    }

    fn quad_tail(&self, t: f64) -> Result<f64> {
        quadrature::integrate_log_to_infinity(|s| self.density(s), t, Tolerance::KERNEL, &self.what("tail mass"))
            .map(|(v, _)| v)
    }

    fn what(&self, kind: &str) -> String {
        match self {
            HalfLaw::Custom { label, .. } => format!("{kind} of density `{label}`"),
            _ => format!("{kind} of tempered-stable density"),
        }
    }

    /// `∫_a^b t^q density(t) dt` with `0 <= a <= b < inf`.
    fn moment(&self, q: u32, a: f64, b: f64) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        match *self {
            HalfLaw::Gaussian { rate, mean, sd } => Ok(rate * gaussian_moment(q, a, b, mean, sd)),
            HalfLaw::Exponential { rate, scale } => {
                Ok(rate * scale.powi(q as i32) * (lower_gamma_int(q, b / scale) - lower_gamma_int(q, a / scale)))
            }
            HalfLaw::Power { c, alpha } => Ok(power_moment(c, alpha, q, a, b)),
            HalfLaw::Tempered { c, alpha, .. } if self.untempered() => Ok(power_moment(c, alpha, q, a, b)),
            HalfLaw::Tempered { c, alpha, theta } => {
                // t^q t^{-1-α}(e^{-θt} - 1) grouped so that no factor overflows near 0.
                let p = f64::from(q) - alpha;
                let g = |t: f64| c * t.powf(p) * ((-theta * t).exp_m1() / t);
                let what = self.what("truncated moment");
                let (corr, _) = if a == 0.0 {
                    quadrature::integrate_log_from_zero(g, b, Tolerance::KERNEL, &what)?
                } else {
                    quadrature::integrate_log(g, a, b, Tolerance::KERNEL, &what)?
                };
                Ok(power_moment(c, alpha, q, a, b) + corr)
            }
            _ => {
                let qf = q as i32;
                let g = |t: f64| t.powi(qf) * self.density(t);
                let what = self.what("truncated moment");
                let r = if a == 0.0 {
                    quadrature::integrate_log_from_zero(g, b, Tolerance::KERNEL, &what)
                } else {
                    quadrature::integrate_log(g, a, b, Tolerance::KERNEL, &what)
                };
                r.map(|(v, _)| v)
            }
        }
    }
}

fn power_moment(c: f64, alpha: f64, q: u32, a: f64, b: f64) -> f64 {
    let p = f64::from(q) - alpha;
    if p.abs() < 1e-14 {
        c * (b / a).ln()
    } else {
        c * (b.powf(p) - a.powf(p)) / p
    }
}

/// `∫_a^b t^q φ_{m,s}(t) dt` via `I_{q+1} = m I_q + s^2 (q I_{q-1} - [t^q φ]_a^b)`.
fn gaussian_moment(q: u32, a: f64, b: f64, mean: f64, sd: f64) -> f64 {
    let za = (a - mean) / sd;
    let zb = (b - mean) / sd;
    let i0 = if za > 0.0 {
        normal_q(za) - normal_q(zb)
    } else {
        normal_q(-zb) - normal_q(-za)
    };
    let pa = std_normal_pdf(za) / sd;
    let pb = std_normal_pdf(zb) / sd;
    let mut prev = 0.0;
    let mut cur = i0;
    for k in 0..q {
        let boundary = b.powi(k as i32) * pb - a.powi(k as i32) * pa;
        let next = mean * cur + sd * sd * (f64::from(k) * prev - boundary);
        prev = cur;
        cur = next;
    }
    cur
}

impl JumpComponent {
    fn half(&self, side: Side) -> Option<HalfLaw<'_>> {
        let plus = side == Side::Plus;
        Some(match self {
            Self::Gaussian { rate, mean, sd } => HalfLaw::Gaussian {
                rate: *rate,
                mean: if plus { *mean } else { -*mean },
                sd: *sd,
            },
            Self::BilateralExponential { rate, p_up, scale } => {
                let r = if plus { rate * p_up } else { rate * (1.0 - p_up) };
                if r == 0.0 {
                    return None;
                }
                HalfLaw::Exponential { rate: r, scale: *scale }
            }
            Self::SymmetricStable { c, alpha } => HalfLaw::Power { c: *c, alpha: *alpha },
            Self::TemperedStable { c, alpha, theta } => HalfLaw::Tempered {
                c: *c,
                alpha: *alpha,
                theta: *theta,
            },
            Self::Density { density, label, .. } => HalfLaw::Custom {
                density,
                mirror: !plus,
                label,
            },
        })
    }

    pub fn near_zero_order(&self) -> f64 {
        match self {
            Self::Gaussian { .. } | Self::BilateralExponential { .. } => 0.0,
            Self::SymmetricStable { alpha, .. } | Self::TemperedStable { alpha, .. } => *alpha,
            Self::Density { near_zero_order, .. } => *near_zero_order,
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match self.half(Side::of(x)) {
            Some(h) => h.density(x.abs()),
            None => 0.0,
        }
    }

    pub fn has_closed_form(&self) -> bool {
        match self {
            Self::TemperedStable { theta, .. } => *theta == 0.0,
            Self::Density { .. } => false,
            _ => true,
        }
    }

    /// `∫ (e^{ixz} - 1 - ixz 1_{|x|<1}) ν(dx)` in closed form, when one exists.
    pub fn jump_integral_closed_form(&self, z: f64) -> Option<Complex64> {
        let i = Complex64::i();
        match *self {
            Self::Gaussian { rate, mean, sd } => {
                let cf = (i * mean * z - 0.5 * sd * sd * z * z).exp();
                let m1 = rate * (gaussian_moment(1, 0.0, 1.0, mean, sd) - gaussian_moment(1, 0.0, 1.0, -mean, sd));
                Some(rate * (cf - 1.0) - i * z * m1)
            }
            Self::BilateralExponential { rate, p_up, scale } => {
                let cf = p_up / (1.0 - i * scale * z) + (1.0 - p_up) / (1.0 + i * scale * z);
                let e1 = scale * lower_gamma_int(1, 1.0 / scale);
                let m1 = rate * (p_up - (1.0 - p_up)) * e1;
                Some(rate * (cf - 1.0) - i * z * m1)
            }
            Self::SymmetricStable { c, alpha } => {
                Some(Complex64::new(-stable_constant(c, alpha) * z.abs().powf(alpha), 0.0))
            }
            Self::TemperedStable { c, alpha, theta } => {
                if theta == 0.0 {
                    return Some(Complex64::new(-stable_constant(c, alpha) * z.abs().powf(alpha), 0.0));
                }
                let re = if (alpha - 1.0).abs() < 1e-12 {
                    // ∫(1-cos zx) e^{-θx} x^{-2} dx = z atan(z/θ) - (θ/2) ln(1+z²/θ²)
                    2.0 * c * (z * (z / theta).atan() - 0.5 * theta * (1.0 + (z / theta).powi(2)).ln())
                } else {
                    let w = Complex64::new(theta, -z).powf(alpha);
                    -2.0 * c * gamma(-alpha) * (w.re - theta.powf(alpha))
                };
                Some(Complex64::new(-re, 0.0))
            }
            Self::Density { .. } => None,
        }
    }
}

/// `K` with `∫(1 - cos xz) c|x|^{-1-α} dx = K |z|^α`.
pub fn stable_constant(c: f64, alpha: f64) -> f64 {
    if (alpha - 1.0).abs() < 1e-12 {
        c * std::f64::consts::PI
    } else {
        2.0 * c * gamma(1.0 - alpha) * (std::f64::consts::FRAC_PI_2 * alpha).cos() / alpha
    }
}

/// A Levy measure on `R \ {0}`: sum of density components and atoms.
#[derive(Clone, Debug, Default)]
pub struct LevyMeasure {
    components: Vec<JumpComponent>,
    atoms: Vec<Atom>,
}

/// Sample points used for the pointwise density checks.
fn probe_points() -> impl Iterator<Item = f64> {
    (-40..=12).flat_map(|e| {
        let base = 2f64.powf(e as f64 * 0.5);
        [base, -base, 1.3 * base, -1.3 * base]
    })
}

impl LevyMeasure {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds and validates a measure. Densities are probed on a log-spaced
    /// set of points; non-finite or negative samples are rejected with the
    /// offending location.
    pub fn new(components: Vec<JumpComponent>, atoms: Vec<Atom>) -> Result<Self> {
        for atom in &atoms {
            if atom.location == 0.0 || !atom.location.is_finite() {
                return Err(Error::InvalidMeasure {
                    x: atom.location,
                    reason: "atoms must sit at a finite nonzero location".into(),
                });
            }
            if !(atom.mass > 0.0 && atom.mass.is_finite()) {
                return Err(Error::InvalidMeasure {
                    x: atom.location,
                    reason: format!("atom mass {} must be positive and finite", atom.mass),
                });
            }
        }
        let m = Self { components, atoms };
        let order = m.near_zero_order();
        if !(0.0..2.0).contains(&order) {
            return Err(Error::InvalidMeasure {
                x: 0.0,
                reason: format!("near-zero order {order} must lie in [0, 2) for x²/(1+x²) integrability"),
            });
        }
        for x in probe_points() {
            let d = m.density(x);
            if !d.is_finite() {
                return Err(Error::InvalidMeasure {
                    x,
                    reason: format!("density sample {d} is not finite"),
                });
            }
            if d < 0.0 {
                return Err(Error::InvalidMeasure {
                    x,
                    reason: format!("density sample {d} is negative"),
                });
            }
        }
        Ok(m)
    }

    pub fn from_density<F>(label: &str, near_zero_order: f64, density: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(
            vec![JumpComponent::Density {
                label: label.to_string(),
                density: Arc::new(density),
                near_zero_order,
            }],
            Vec::new(),
        )
    }

    pub fn components(&self) -> &[JumpComponent] {
        &self.components
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty() && self.atoms.is_empty()
    }

    pub fn has_closed_form(&self) -> bool {
        self.components.iter().all(JumpComponent::has_closed_form)
    }

    /// Superposition of two measures.
    pub fn sum(&self, other: &LevyMeasure) -> LevyMeasure {
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().copied());
        LevyMeasure { components, atoms }
    }

    /// Largest `ρ` with `ν(x) = O(|x|^{-1-ρ})` at the origin.
    pub fn near_zero_order(&self) -> f64 {
        self.components
            .iter()
            .map(JumpComponent::near_zero_order)
            .fold(0.0, f64::max)
    }

    /// Exponent `s` in `|k(u)| = O(|u|^{-s})`; logarithmic growth maps to 0.
    pub fn kernel_singular_exponent(&self) -> f64 {
        (self.near_zero_order() - 1.0).max(0.0)
    }

    /// Total density at `x != 0` (atoms excluded).
    pub fn density(&self, x: f64) -> f64 {
        self.components.iter().map(|c| c.density(x)).sum()
    }

    fn halves(&self, side: Side) -> impl Iterator<Item = HalfLaw<'_>> {
        self.components.iter().filter_map(move |c| c.half(side))
    }

    fn side_atoms(&self, side: Side) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.atoms
            .iter()
            .filter(move |a| Side::of(a.location) == side)
            .map(|a| (a.location.abs(), a.mass))
    }

    /// Mass of `{x : side, |x| >= t}`, atoms at magnitude exactly `t` included.
    pub fn tail(&self, side: Side, t: f64) -> Result<f64> {
        let mut total = 0.0;
        for h in self.halves(side) {
            total += h.tail(t)?;
        }
        total += self
            .side_atoms(side)
            .filter(|(s, _)| *s >= t)
            .map(|(_, m)| m)
            .sum::<f64>();
        Ok(total)
    }

    /// Density-only tail mass on one side, atoms excluded.
    pub fn density_tail(&self, side: Side, t: f64) -> Result<f64> {
        let mut total = 0.0;
        for h in self.halves(side) {
            total += h.tail(t)?;
        }
        Ok(total)
    }

    /// `∫_{a <= |x| <= b, side} |x|^q ν(dx)`; atoms are counted on the closed range.
    pub fn abs_moment(&self, side: Side, q: u32, a: f64, b: f64) -> Result<f64> {
        let mut total = self.density_abs_moment(side, q, a, b)?;
        total += self
            .side_atoms(side)
            .filter(|(s, _)| *s >= a && *s <= b)
            .map(|(s, m)| m * s.powi(q as i32))
            .sum::<f64>();
        Ok(total)
    }

    /// Density-only version of [`abs_moment`](Self::abs_moment).
    pub fn density_abs_moment(&self, side: Side, q: u32, a: f64, b: f64) -> Result<f64> {
        let mut total = 0.0;
        for h in self.halves(side) {
            total += h.moment(q, a, b)?;
        }
        Ok(total)
    }

    /// `∫_{|y| < δ} y² ν(dy)`.
    pub fn second_moment_near_zero(&self, delta: f64) -> Result<f64> {
        let mut total = self.density_abs_moment(Side::Minus, 2, 0.0, delta)?
            + self.density_abs_moment(Side::Plus, 2, 0.0, delta)?;
        total += self
            .atoms
            .iter()
            .filter(|a| a.location.abs() < delta)
            .map(|a| a.mass * a.location * a.location)
            .sum::<f64>();
        Ok(total)
    }

    /// Mass of `{|x| > r}`: closed tails for the density, atoms strictly beyond `r`.
    pub fn mass_beyond(&self, r: f64) -> Result<f64> {
        let dens = self.density_tail(Side::Minus, r)? + self.density_tail(Side::Plus, r)?;
        let atoms: f64 = self.atoms.iter().filter(|a| a.location.abs() > r).map(|a| a.mass).sum();
        Ok(dens + atoms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn lower_gamma_branches_agree_with_quadrature() {
        for q in 0..=4u32 {
            for &u in &[1e-4, 0.3, 0.999, 1.0, 2.5, 40.0] {
                let (v, _) =
                    quadrature::integrate(|v| v.powi(q as i32) * (-v).exp(), 0.0, u, Tolerance::KERNEL, "g").unwrap();
                assert!(rel(lower_gamma_int(q, u), v) < 1e-12, "q={q} u={u}");
            }
        }
    }

    #[test]
    fn gaussian_moments_match_quadrature() {
        for &(m, s) in &[(0.0, 1.0), (0.7, 0.4), (-1.2, 2.0)] {
            for q in 0..=4u32 {
                let g = |t: f64| t.powi(q as i32) * std_normal_pdf((t - m) / s) / s;
                let (v, _) = quadrature::integrate(g, 0.05, 1.7, Tolerance::KERNEL, "g").unwrap();
                let c = gaussian_moment(q, 0.05, 1.7, m, s);
                assert!((c - v).abs() < 1e-13, "m={m} s={s} q={q}: {c} vs {v}");
            }
        }
    }

    #[test]
    fn closed_and_quadrature_tails_agree() {
        // Tempered with theta = 0 takes closed forms; the Density path integrates.
        let alpha = 1.3;
        let closed = LevyMeasure::new(vec![JumpComponent::SymmetricStable { c: 0.8, alpha }], vec![]).unwrap();
        let numeric =
            LevyMeasure::from_density("stable", alpha, move |x: f64| 0.8 * x.abs().powf(-1.0 - alpha)).unwrap();
        for &t in &[1e-3, 0.25, 1.0, 7.0] {
            for side in [Side::Minus, Side::Plus] {
                let a = closed.tail(side, t).unwrap();
                let b = numeric.tail(side, t).unwrap();
                assert!(rel(a, b) < 1e-10, "tail t={t}");
                for q in 1..=4u32 {
                    let a = closed.abs_moment(side, q, t, 2.0 * t + 0.5).unwrap();
                    let b = numeric.abs_moment(side, q, t, 2.0 * t + 0.5).unwrap();
                    assert!(rel(a, b) < 1e-10, "moment q={q} t={t}");
                }
            }
        }
        let a = closed.second_moment_near_zero(0.1).unwrap();
        let b = numeric.second_moment_near_zero(0.1).unwrap();
        assert!(rel(a, b) < 1e-10);
    }

    #[test]
    fn untempered_and_weakly_tempered_moments_are_finite() {
        let alpha = 1.95;
        let power = LevyMeasure::new(vec![JumpComponent::SymmetricStable { c: 1.0, alpha }], vec![]).unwrap();
        let flat = LevyMeasure::new(
            vec![JumpComponent::TemperedStable {
                c: 1.0,
                alpha,
                theta: 0.0,
            }],
            vec![],
        )
        .unwrap();
        for &d in &[1e-8, 0.01, 1.0] {
            assert_eq!(
                flat.second_moment_near_zero(d).unwrap(),
                power.second_moment_near_zero(d).unwrap()
            );
            assert_eq!(flat.tail(Side::Plus, d).unwrap(), power.tail(Side::Plus, d).unwrap());
        }
        // Small θ: the correction is O(θ) relative to the power part.
        let weak = LevyMeasure::new(
            vec![JumpComponent::TemperedStable {
                c: 1.0,
                alpha,
                theta: 1e-6,
            }],
            vec![],
        )
        .unwrap();
        let (w, p) = (
            weak.second_moment_near_zero(0.5).unwrap(),
            power.second_moment_near_zero(0.5).unwrap(),
        );
        assert!(w < p && rel(w, p) < 1e-6);
    }

    #[test]
    fn atoms_enter_closed_ranges() {
        let m = LevyMeasure::new(
            vec![],
            vec![
                Atom {
                    location: 1.0,
                    mass: 0.5,
                },
                Atom {
                    location: -0.3,
                    mass: 2.0,
                },
            ],
        )
        .unwrap();
        assert_eq!(m.tail(Side::Plus, 1.0).unwrap(), 0.5);
        assert_eq!(m.tail(Side::Plus, 1.0 + 1e-12).unwrap(), 0.0);
        assert_eq!(m.tail(Side::Minus, 0.3).unwrap(), 2.0);
        assert!((m.second_moment_near_zero(0.5).unwrap() - 0.18).abs() < 1e-15);
        assert_eq!(m.mass_beyond(1.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_invalid_measures() {
        let r = LevyMeasure::from_density("cubic", 2.0, |x: f64| x.abs().powi(-3));
        assert!(matches!(r, Err(Error::InvalidMeasure { .. })));
        let r = LevyMeasure::from_density("nan", 0.0, |x: f64| if x > 3.0 { f64::NAN } else { 1.0 });
        match r {
            Err(Error::InvalidMeasure { x, .. }) => assert!(x > 3.0),
            other => panic!("{other:?}"),
        }
        let r = LevyMeasure::new(
            vec![],
            vec![Atom {
                location: 0.5,
                mass: -1.0,
            }],
        );
        assert!(matches!(r, Err(Error::InvalidMeasure { .. })));
    }
}
