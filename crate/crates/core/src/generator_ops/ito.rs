//! Pointwise evaluation of `½Af'' + γf' + ∫(f(x+y) - f(x) - yf'(x)1_{|y|<=1}) ν(dy)`.

use rayon::prelude::*;

use super::grid::{Grid, SampledFunction};
use super::test_functions::TestFunction;
use crate::error::{Error, Result};
use crate::levy_model::{LevyTriplet, Side};
use crate::quadrature::{self, Tolerance};

/// Bound on the discarded third-order Taylor remainder of the `|y| < δ` part.
pub const TAYLOR_BUDGET: f64 = 1e-9;
const TOLERANCE: Tolerance = Tolerance::new(1e-12, 1e-10);

const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Per-function data shared by every evaluation point.
#[derive(Debug, Clone, Copy)]
pub struct ItoPlan {
    /// Inner cut `δ`.
    pub delta: f64,
    /// Density part of `∫_{|y|<δ} y² ν(dy)`.
    pub inner_second_moment: f64,
    /// Density mass of `|y| >= 1`.
    pub outer_mass: f64,
}

impl ItoPlan {
    /// Starts at `δ = min(1, 8h)` and halves until `sup|f'''| δ M₂(δ) / 6 <= TAYLOR_BUDGET`.
    pub fn new(t: &LevyTriplet, f: &dyn TestFunction, h: f64) -> Result<Self> {
        let m = &t.measure;
        let m2 = |d: f64| -> Result<f64> {
            Ok(m.density_abs_moment(Side::Minus, 2, 0.0, d)? + m.density_abs_moment(Side::Plus, 2, 0.0, d)?)
        };
        let sup3 = f.sup_third_derivative();
        let mut delta = (8.0 * h).min(1.0);
        let mut second = m2(delta)?;
        while sup3 * delta * second / 6.0 > TAYLOR_BUDGET {
            delta *= 0.5;
            second = m2(delta)?;
            if delta < 1e-200 {
                return Err(Error::NumericalFailure {
                    what: "inner cut of the jump integral".into(),
                    achieved: sup3 * delta * second / 6.0,
                    requested: TAYLOR_BUDGET,
                });
            }
        }
        Ok(Self {
            delta,
            inner_second_moment: second,
            outer_mass: m.density_tail(Side::Minus, 1.0)? + m.density_tail(Side::Plus, 1.0)?,
        })
    }

    pub fn eval(&self, t: &LevyTriplet, f: &dyn TestFunction, x: f64) -> Result<f64> {
        let [f0, f1, f2, _] = f.jet(x);
        let mut total = 0.5 * t.diffusion * f2 + t.gamma * f1;
        let m = &t.measure;
        if m.is_empty() {
            return Ok(total);
        }
        let (lo, hi) = f.support();

        for a in m.atoms() {
            let s = a.location;
            let comp = if s.abs() <= 1.0 { s * f1 } else { 0.0 };
            total += a.mass * (f.value(x + s) - f0 - comp);
        }
        if m.components().is_empty() {
            return Ok(total);
        }

        total += 0.5 * f2 * self.inner_second_moment;

        let near_support = x + 1.0 >= lo && x - 1.0 <= hi;
        if near_support && self.delta < 1.0 {
            let small = 0.05 * f.length_scale();
            let increment = |y: f64| -> f64 {
                if y.abs() < small {
                    // y² ∫_0^1 (1-σ) f''(x+yσ) dσ
                    let mut acc = 0.0;
                    for k in 0..4 {
                        for sgn in [-1.0, 1.0] {
                            let sigma = 0.5 * (1.0 + sgn * GL8_NODES[k]);
                            acc += GL8_WEIGHTS[k] * (1.0 - sigma) * f.jet(x + y * sigma)[2];
                        }
                    }
                    0.5 * y * y * acc
                } else {
                    f.value(x + y) - f0 - y * f1
                }
            };
            let (mid, _) = quadrature::integrate(
                |s| {
                    let y = s.exp();
                    y * (increment(y) * m.density(y) + increment(-y) * m.density(-y))
                },
                self.delta.ln(),
                0.0,
                TOLERANCE,
                "compensated jump integral",
            )
            .map_err(|e| at(e, x))?;
            total += mid;
        }

        // |y| > 1: uncompensated, restricted to the support of f(x + ·).
        for (a, b) in [((lo - x).max(1.0), hi - x), (lo - x, (hi - x).min(-1.0))] {
            if b > a {
                let (v, _) = quadrature::integrate(
                    |y| f.value(x + y) * m.density(y),
                    a,
                    b,
                    TOLERANCE,
                    "large-jump integral",
                )
                .map_err(|e| at(e, x))?;
                total += v;
            }
        }
        total -= f0 * self.outer_mass;
        Ok(total)
    }
}

fn at(e: Error, x: f64) -> Error {
    match e {
        Error::NumericalFailure {
            what,
            achieved,
            requested,
        } => Error::NumericalFailure {
            what: format!("{what} at x = {x}"),
            achieved,
            requested,
        },
        other => other,
    }
}

/// `Lf(x)` for a single point, with the inner cut derived from spacing `h`.
pub fn ito_at(t: &LevyTriplet, f: &dyn TestFunction, x: f64, h: f64) -> Result<f64> {
    ItoPlan::new(t, f, h)?.eval(t, f, x)
}

/// Jump-integral form of the generator at every grid node.
pub fn apply_ito(t: &LevyTriplet, f: &dyn TestFunction, grid: &Grid) -> Result<SampledFunction> {
    let (lo, hi) = f.support();
    if !(lo > grid.lo() && hi < grid.hi()) {
        return Err(Error::Support(format!(
            "{} has support [{lo}, {hi}] not interior to [{}, {}]",
            f.describe(),
            grid.lo(),
            grid.hi()
        )));
    }
    let plan = ItoPlan::new(t, f, grid.h())?;
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| plan.eval(t, f, grid.node(i)))
        .collect::<Result<Vec<f64>>>()?;
    SampledFunction::new(*grid, values, None)
}
