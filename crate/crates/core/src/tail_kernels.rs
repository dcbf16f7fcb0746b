//! Tail functions `μ±`, kernel branches `k±` and the assembled difference
//! kernel of the convolution form.
//!
//! Conventions: `μ_-(x) = ν((-∞, x])` for `x < 0`, `μ_+(x) = -ν([x, ∞))` for
//! `x > 0`, `k_-(x) = ∫_{-1}^x μ_-`, `k_+(x) = -∫_x^1 μ_+`. The total kernel is
//! applied as `k(y - x)` and equals `k_±(u) - (c/2) sign(u)` with `c = γ - Γ`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::levy_model::{LevyMeasure, LevyTriplet, Side};
use crate::quadrature::{self, Tolerance};

const CELL_TOLERANCE: Tolerance = Tolerance::new(1e-15, 1e-12);

fn check_side(op: &'static str, side: Side, x: f64) -> Result<()> {
    let ok = match side {
        Side::Minus => x < 0.0,
        Side::Plus => x > 0.0,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            op,
            domain: match side {
                Side::Minus => "x < 0",
                Side::Plus => "x > 0",
            },
            x,
        })
    }
}

/// `μ_-(x) = ν((-∞, x])`, atoms at `x` included.
pub fn mu_minus(m: &LevyMeasure, x: f64) -> Result<f64> {
    check_side("mu_minus", Side::Minus, x)?;
    m.tail(Side::Minus, -x)
}

/// `μ_+(x) = -ν([x, ∞))`, atoms at `x` included.
pub fn mu_plus(m: &LevyMeasure, x: f64) -> Result<f64> {
    check_side("mu_plus", Side::Plus, x)?;
    Ok(-m.tail(Side::Plus, x)?)
}

/// `∫_v^1 T(s) ds` where `T(s)` is the mass at magnitude `>= s` on `side`.
///
/// Integration by parts gives `T(1) - v T(v) + ∫_v^1 s ν(ds)` for the density;
/// an atom of mass `m` at magnitude `σ` contributes `m (min(1, σ) - min(v, σ))`.
fn branch(m: &LevyMeasure, side: Side, v: f64) -> Result<f64> {
    if v == 1.0 {
        return Ok(0.0);
    }
    let t1 = m.density_tail(side, 1.0)?;
    let tv = m.density_tail(side, v)?;
    let m1 = if v < 1.0 {
        m.density_abs_moment(side, 1, v, 1.0)?
    } else {
        -m.density_abs_moment(side, 1, 1.0, v)?
    };
    let atoms: f64 = m
        .atoms()
        .iter()
        .filter(|a| Side::of(a.location) == side)
        .map(|a| {
            let s = a.location.abs();
            a.mass * (s.min(1.0) - s.min(v))
        })
        .sum();
    Ok(t1 - v * tv + m1 + atoms)
}

/// `k_-(x) = ∫_{-1}^x μ_-(t) dt`.
pub fn k_minus(m: &LevyMeasure, x: f64) -> Result<f64> {
    check_side("k_minus", Side::Minus, x)?;
    branch(m, Side::Minus, -x)
}

/// `k_+(x) = -∫_x^1 μ_+(t) dt`.
pub fn k_plus(m: &LevyMeasure, x: f64) -> Result<f64> {
    check_side("k_plus", Side::Plus, x)?;
    branch(m, Side::Plus, x)
}

/// `Γ = μ_-(-1) + μ_+(1)`, the drift carried by the kernel branches.
pub fn gamma_correction(m: &LevyMeasure) -> Result<f64> {
    Ok(mu_minus(m, -1.0)? + mu_plus(m, 1.0)?)
}

/// One of `μ_-`, `μ_+` bound to a measure.
#[derive(Clone, Debug)]
pub struct TailFunction {
    pub side: Side,
    pub closed_form: Option<String>,
    measure: LevyMeasure,
}

impl TailFunction {
    pub fn new(m: &LevyMeasure, side: Side) -> Self {
        Self {
            side,
            closed_form: describe(m),
            measure: m.clone(),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.side {
            Side::Minus => mu_minus(&self.measure, x),
            Side::Plus => mu_plus(&self.measure, x),
        }
    }
}

fn describe(m: &LevyMeasure) -> Option<String> {
    if !m.has_closed_form() {
        return None;
    }
    let parts: Vec<String> = m.components().iter().map(|c| format!("{c:?}")).collect();
    Some(parts.join(" + "))
}

/// One of `k_-`, `k_+` bound to a measure.
#[derive(Clone, Debug)]
pub struct KernelFunction {
    pub side: Side,
    /// `s` with `|k(x)| = O(|x|^{-s})` at the origin.
    pub singular_exponent: f64,
    measure: LevyMeasure,
}

impl KernelFunction {
    pub fn new(m: &LevyMeasure, side: Side) -> Self {
        Self {
            side,
            singular_exponent: m.kernel_singular_exponent(),
            measure: m.clone(),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.side {
            Side::Minus => k_minus(&self.measure, x),
            Side::Plus => k_plus(&self.measure, x),
        }
    }

    /// Value at magnitude `v > 0` on this branch's side.
    fn at_magnitude(&self, v: f64) -> Result<f64> {
        branch(&self.measure, self.side, v)
    }
}

/// The difference kernel `k(u) = k_±(u) - (c/2) sign(u)`.
#[derive(Clone, Debug)]
pub struct AssembledKernel {
    pub jump_minus: KernelFunction,
    pub jump_plus: KernelFunction,
    /// `c = γ - Γ`.
    pub drift_coefficient: f64,
    pub gamma_correction: f64,
}

pub fn assemble_kernel(t: &LevyTriplet) -> Result<AssembledKernel> {
    let g = gamma_correction(&t.measure)?;
    Ok(AssembledKernel {
        jump_minus: KernelFunction::new(&t.measure, Side::Minus),
        jump_plus: KernelFunction::new(&t.measure, Side::Plus),
        drift_coefficient: t.gamma - g,
        gamma_correction: g,
    })
}

impl AssembledKernel {
    /// Total kernel at `u != 0`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        let half_c = 0.5 * self.drift_coefficient;
        if u < 0.0 {
            Ok(self.jump_minus.eval(u)? + half_c)
        } else if u > 0.0 {
            Ok(self.jump_plus.eval(u)? - half_c)
        } else {
            Err(Error::Domain {
                op: "kernel",
                domain: "u != 0",
                x: u,
            })
        }
    }

    pub fn singular_exponent(&self) -> f64 {
        self.jump_plus.singular_exponent
    }

    pub fn is_zero(&self) -> bool {
        self.drift_coefficient == 0.0 && self.jump_plus.measure.is_empty()
    }

    fn jump(&self, u: f64) -> Result<f64> {
        if u < 0.0 {
            self.jump_minus.at_magnitude(-u)
        } else {
            self.jump_plus.at_magnitude(u)
        }
    }

    /// Moments `∫_cell k(u) ((u - jh)/h)^p du`, `p = 0, 1, 2`, of the cell
    /// `[(j-½)h, (j+½)h]`.
    pub fn cell_moments(&self, h: f64, j: i64) -> Result<[f64; 3]> {
        let c = self.drift_coefficient;
        let mut out = if j == 0 {
            [0.0, -c * h / 8.0, 0.0]
        } else {
            let s = -0.5 * c * (j.signum() as f64) * h;
            [s, 0.0, s / 12.0]
        };
        if !self.jump_plus.measure.is_empty() {
            let jump = if j == 0 {
                self.center_cell_jump(h)?
            } else {
                let uj = j as f64 * h;
                let mut err = None;
                let q = quadrature::integrate_n(
                    |u| {
                        let d = (u - uj) / h;
                        match self.jump(u) {
                            Ok(k) => [k, k * d, k * d * d],
                            Err(e) => {
                                err.get_or_insert(e);
                                [0.0; 3]
                            }
                        }
                    },
                    uj - 0.5 * h,
                    uj + 0.5 * h,
                    CELL_TOLERANCE,
                    "kernel cell moment",
                );
                if let Some(e) = err {
                    return Err(e);
                }
                q.map_err(|e| self.integrability(j, e))?.value
            };
            for (o, v) in out.iter_mut().zip(jump) {
                *o += v;
            }
        }
        if let Some(v) = out.iter().find(|v| !v.is_finite()) {
            return Err(Error::KernelIntegrability { index: j, value: *v });
        }
        Ok(out)
    }

    fn center_cell_jump(&self, h: f64) -> Result<[f64; 3]> {
        let mut out = [0.0; 3];
        for (side, sign) in [(Side::Minus, -1.0), (Side::Plus, 1.0)] {
            let branch = if side == Side::Minus {
                &self.jump_minus
            } else {
                &self.jump_plus
            };
            let mut err = None;
            let q = quadrature::integrate_endpoint_singular_n(
                |v| match branch.at_magnitude(v) {
                    Ok(k) => {
                        let d = sign * v / h;
                        [k, k * d, k * d * d]
                    }
                    Err(e) => {
                        err.get_or_insert(e);
                        [0.0; 3]
                    }
                },
                0.5 * h,
                branch.singular_exponent,
                CELL_TOLERANCE,
                "central kernel cell",
            );
            if let Some(e) = err {
                return Err(e);
            }
            let q = q.map_err(|e| self.integrability(0, e))?;
            for (o, v) in out.iter_mut().zip(q.value) {
                *o += v;
            }
        }
        Ok(out)
    }

    fn integrability(&self, j: i64, e: Error) -> Error {
        match e {
            Error::NumericalFailure { achieved, .. } if !achieved.is_finite() => Error::KernelIntegrability {
                index: j,
                value: achieved,
            },
            other => other,
        }
    }

    /// Cell moments for `j = -n..=n`, indexed by `j + n`.
    pub fn cell_moment_table(&self, h: f64, n: usize) -> Result<Vec<[f64; 3]>> {
        let n = n as i64;
        (-n..=n).into_par_iter().map(|j| self.cell_moments(h, j)).collect()
    }
}

/// `w_j = ∫_{(j-½)h}^{(j+½)h} k(u) du` for `j = -n..=n`, indexed by `j + n`.
pub fn cell_averaged_weights(k: &AssembledKernel, h: f64, n: usize) -> Result<Vec<f64>> {
    Ok(k.cell_moment_table(h, n)?.into_iter().map(|m| m[0]).collect())
}

/// Weights `W_j` for the discrete operator `Σ_j W_j g(x + jh)` that is exact
/// through second order in the local Taylor expansion of `g` on each cell.
/// The first and second moments are folded into neighbouring weights through
/// central differences.
pub fn corrected_weights(k: &AssembledKernel, h: f64, n: usize) -> Result<Vec<f64>> {
    let m = k.cell_moment_table(h, n)?;
    let get = |i: isize, p: usize| -> f64 {
        if i < 0 || i as usize >= m.len() {
            0.0
        } else {
            m[i as usize][p]
        }
    };
    Ok((0..m.len() as isize)
        .map(|i| {
            get(i, 0) + 0.5 * (get(i - 1, 1) - get(i + 1, 1)) + 0.5 * (get(i - 1, 2) - 2.0 * get(i, 2) + get(i + 1, 2))
        })
        .collect())
}
