//! Compactly supported test functions with closed-form derivatives.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use super::grid::{Grid, SampledFunction};
use crate::error::{Error, Result};

/// A compactly supported `C²` function with closed-form derivatives up to third order.
pub trait TestFunction: Send + Sync {
    /// `[f, f', f'', f''']` at `x`.
    fn jet(&self, x: f64) -> [f64; 4];

    /// Closed interval outside of which the function vanishes identically.
    fn support(&self) -> (f64, f64);

    /// Scale over which the function varies by `O(1)` relative amounts.
    fn length_scale(&self) -> f64;

    fn value(&self, x: f64) -> f64 {
        self.jet(x)[0]
    }

    fn describe(&self) -> String;

    /// Samples derivative `order` (0..=3) on the grid.
    fn sample(&self, grid: &Grid, order: usize) -> Result<SampledFunction> {
        let (lo, hi) = self.support();
        if !(lo > grid.lo() && hi < grid.hi()) {
            return Err(Error::Support(format!(
                "{} has support [{lo}, {hi}] not interior to [{}, {}]",
                self.describe(),
                grid.lo(),
                grid.hi()
            )));
        }
        let values = grid.nodes().into_iter().map(|x| self.jet(x)[order]).collect();
        SampledFunction::new(*grid, values, Some(lo.abs().max(hi.abs())))
    }

    /// `max |f'''|` on a fine sampling of the support, inflated by 10%.
    fn sup_third_derivative(&self) -> f64 {
        let (lo, hi) = self.support();
        let m = 4000;
        let sup = (0..=m)
            .map(|i| self.jet(lo + (hi - lo) * i as f64 / m as f64)[3].abs())
            .fold(0.0, f64::max);
        1.1 * sup
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    GaussianBump,
    PolynomialBump,
    SineBump,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 3] = [
        FamilyKind::GaussianBump,
        FamilyKind::PolynomialBump,
        FamilyKind::SineBump,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::GaussianBump => "gaussian_bump",
            FamilyKind::PolynomialBump => "polynomial_bump",
            FamilyKind::SineBump => "sine_bump",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// A member of one of the built-in families, supported on `[center - width, center + width]`.
///
/// * `gaussian_bump`: `exp(-4r²) (1 - r²)^6`, `r = (x - center)/width`, peak 1.
/// * `polynomial_bump`: `(1 - r²)^6`.
/// * `sine_bump`: `sin(frequency (x - center))` times the gaussian bump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestFamily {
    pub kind: FamilyKind,
    pub center: f64,
    pub width: f64,
    pub frequency: f64,
}

impl TestFamily {
    pub fn new(kind: FamilyKind, center: f64, width: f64, frequency: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::Parameter {
                field: "width".into(),
                value: width,
                bound: "width > 0".into(),
            });
        }
        if !center.is_finite() || !frequency.is_finite() {
            return Err(Error::Parameter {
                field: "center/frequency".into(),
                value: if center.is_finite() { frequency } else { center },
                bound: "finite".into(),
            });
        }
        Ok(Self {
            kind,
            center,
            width,
            frequency,
        })
    }

    pub fn gaussian_bump(center: f64, width: f64) -> Self {
        Self::new(FamilyKind::GaussianBump, center, width, 0.0).expect("valid bump")
    }

    pub fn polynomial_bump(center: f64, width: f64) -> Self {
        Self::new(FamilyKind::PolynomialBump, center, width, 0.0).expect("valid bump")
    }

    pub fn sine_bump(center: f64, width: f64, frequency: f64) -> Self {
        Self::new(FamilyKind::SineBump, center, width, frequency).expect("valid bump")
    }
}

const GAUSS_RATE: f64 = 4.0;

/// `exp(-κr²) (1-r²)^6` and its first three `r`-derivatives.
fn gauss_bump(r: f64) -> [f64; 4] {
    let p = poly_bump(r);
    if p[0] == 0.0 {
        return [0.0; 4];
    }
    let k = GAUSS_RATE;
    let e = (-k * r * r).exp();
    let g = [
        e,
        -2.0 * k * r * e,
        (4.0 * k * k * r * r - 2.0 * k) * e,
        (-8.0 * k * k * k * r * r * r + 12.0 * k * k * r) * e,
    ];
    [
        g[0] * p[0],
        g[1] * p[0] + g[0] * p[1],
        g[2] * p[0] + 2.0 * g[1] * p[1] + g[0] * p[2],
        g[3] * p[0] + 3.0 * g[2] * p[1] + 3.0 * g[1] * p[2] + g[0] * p[3],
    ]
}

fn poly_bump(r: f64) -> [f64; 4] {
    let q = 1.0 - r * r;
    if q <= 0.0 {
        return [0.0; 4];
    }
    let (q3, q4) = (q * q * q, q * q * q * q);
    let q5 = q4 * q;
    [
        q5 * q,
        -12.0 * r * q5,
        -12.0 * q5 + 120.0 * r * r * q4,
        360.0 * r * q4 - 960.0 * r * r * r * q3,
    ]
}

impl TestFunction for TestFamily {
    fn jet(&self, x: f64) -> [f64; 4] {
        let r = (x - self.center) / self.width;
        let s = 1.0 / self.width;
        let scale = |d: [f64; 4]| [d[0], d[1] * s, d[2] * s * s, d[3] * s * s * s];
        match self.kind {
            FamilyKind::GaussianBump => scale(gauss_bump(r)),
            FamilyKind::PolynomialBump => scale(poly_bump(r)),
            FamilyKind::SineBump => {
                let m = scale(gauss_bump(r));
                if m[0] == 0.0 {
                    return [0.0; 4];
                }
                let w = self.frequency;
                let (sn, cs) = (w * (x - self.center)).sin_cos();
                let t = [sn, w * cs, -w * w * sn, -w * w * w * cs];
                [
                    t[0] * m[0],
                    t[1] * m[0] + t[0] * m[1],
                    t[2] * m[0] + 2.0 * t[1] * m[1] + t[0] * m[2],
                    t[3] * m[0] + 3.0 * t[2] * m[1] + 3.0 * t[1] * m[2] + t[0] * m[3],
                ]
            }
        }
    }

    fn support(&self) -> (f64, f64) {
        (self.center - self.width, self.center + self.width)
    }

    fn length_scale(&self) -> f64 {
        match self.kind {
            FamilyKind::SineBump if self.frequency != 0.0 => self.width.min(1.0 / self.frequency.abs()),
            _ => self.width,
        }
    }

    fn describe(&self) -> String {
        match self.kind {
            FamilyKind::SineBump => format!(
                "{}(center={}, width={}, frequency={})",
                self.kind, self.center, self.width, self.frequency
            ),
            _ => format!("{}(center={}, width={})", self.kind, self.center, self.width),
        }
    }
}

/// `Σ c_i f_i`.
#[derive(Clone)]
pub struct LinearCombination {
    pub terms: Vec<(f64, Arc<dyn TestFunction>)>,
}

impl TestFunction for LinearCombination {
    fn jet(&self, x: f64) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (c, f) in &self.terms {
            let j = f.jet(x);
            for k in 0..4 {
                out[k] += c * j[k];
            }
        }
        out
    }

    fn support(&self) -> (f64, f64) {
        self.terms
            .iter()
            .map(|(_, f)| f.support())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (lo, hi)| {
                (a.min(lo), b.max(hi))
            })
    }

    fn length_scale(&self) -> f64 {
        self.terms
            .iter()
            .map(|(_, f)| f.length_scale())
            .fold(f64::INFINITY, f64::min)
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, f)| format!("{c}*{}", f.describe()))
            .collect();
        parts.join(" + ")
    }
}

/// `f(· - shift)`.
pub struct Shifted<F> {
    pub inner: F,
    pub shift: f64,
}

impl<F: TestFunction> TestFunction for Shifted<F> {
    fn jet(&self, x: f64) -> [f64; 4] {
        self.inner.jet(x - self.shift)
    }

    fn support(&self) -> (f64, f64) {
        let (lo, hi) = self.inner.support();
        (lo + self.shift, hi + self.shift)
    }

    fn length_scale(&self) -> f64 {
        self.inner.length_scale()
    }

    fn describe(&self) -> String {
        format!("{} shifted by {}", self.inner.describe(), self.shift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_derivatives(f: &dyn TestFunction) {
        let (lo, hi) = f.support();
        let e = 1e-5;
        for i in 1..40 {
            let x = lo + (hi - lo) * i as f64 / 40.0;
            let j = f.jet(x);
            let (jp, jm) = (f.jet(x + e), f.jet(x - e));
            for k in 0..3 {
                let fd = (jp[k] - jm[k]) / (2.0 * e);
                assert!(
                    (fd - j[k + 1]).abs() < 1e-5 * j[k + 1].abs().max(1.0),
                    "{} order {} at {x}",
                    f.describe(),
                    k + 1
                );
            }
        }
    }

    #[test]
    fn closed_form_derivatives_match_differences() {
        check_derivatives(&TestFamily::gaussian_bump(0.0, 2.0));
        check_derivatives(&TestFamily::polynomial_bump(0.5, 2.5));
        check_derivatives(&TestFamily::sine_bump(-0.5, 3.0, 2.0));
    }

    #[test]
    fn vanish_outside_support() {
        for kind in FamilyKind::ALL {
            let f = TestFamily::new(kind, 1.0, 0.5, 3.0).unwrap();
            assert_eq!(f.jet(1.5), [0.0; 4]);
            assert_eq!(f.jet(0.4), [0.0; 4]);
            assert_eq!(f.support(), (0.5, 1.5));
        }
        assert_eq!(TestFamily::gaussian_bump(0.0, 1.0).value(0.0), 1.0);
        assert_eq!(TestFamily::polynomial_bump(0.0, 1.0).value(0.0), 1.0);
    }

    #[test]
    fn names_round_trip() {
        for k in FamilyKind::ALL {
            assert_eq!(k.name().parse::<FamilyKind>().unwrap(), k);
        }
        assert!(matches!("tent".parse::<FamilyKind>(), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn sampling_requires_interior_support() {
        let g = Grid::new(0.0, 2.0, 16).unwrap();
        assert!(matches!(
            TestFamily::gaussian_bump(0.0, 2.0).sample(&g, 0),
            Err(Error::Support(_))
        ));
        assert!(TestFamily::gaussian_bump(0.0, 1.0).sample(&g, 0).is_ok());
    }
}
