use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform grid `x_i = center - half_width + i h`, `i = 0..=n`, `h = 2 half_width / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub center: f64,
    pub half_width: f64,
    pub n: usize,
}

impl Grid {
    pub const MIN_POINTS: usize = 16;

    pub fn new(center: f64, half_width: f64, n: usize) -> Result<Self> {
        if n < Self::MIN_POINTS || !n.is_power_of_two() {
            return Err(Error::Grid(format!(
                "n = {n} must be a power of two >= {}",
                Self::MIN_POINTS
            )));
        }
        if !(half_width > 0.0 && half_width.is_finite()) || !center.is_finite() {
            return Err(Error::Grid(format!(
                "half_width = {half_width} must be positive and finite"
            )));
        }
        Ok(Self { center, half_width, n })
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn lo(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn hi(&self) -> f64 {
        self.center + self.half_width
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, i: usize) -> f64 {
        self.lo() + i as f64 * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    /// Index of the node nearest to `x`, if `x` lies on the grid span.
    pub fn nearest(&self, x: f64) -> Option<usize> {
        let i = ((x - self.lo()) / self.h()).round();
        (i >= 0.0 && i <= self.n as f64).then_some(i as usize)
    }
}

/// Grid samples of a function. `support_radius = Some(a)` marks a function
/// vanishing for `|x| > a`; operator outputs carry `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledFunction {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub support_radius: Option<f64>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<f64>, support_radius: Option<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!("{} values for {} nodes", values.len(), grid.len())));
        }
        if let Some(a) = support_radius {
            if !(-a > grid.lo() && a < grid.hi()) {
                return Err(Error::Support(format!(
                    "support [-{a}, {a}] is not interior to the grid [{}, {}]",
                    grid.lo(),
                    grid.hi()
                )));
            }
        }
        Ok(Self {
            grid,
            values,
            support_radius,
        })
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max_i |self_i - other_i|`.
    pub fn max_abs_diff(&self, other: &SampledFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Central differences in the interior (sixth order for `f'`, fourth for `f''`),
/// fourth-order stencils near the ends. Nodes outside the declared support are set to 0.
pub fn differentiate(f: &SampledFunction, order: u8) -> Result<SampledFunction> {
    let g = f.grid;
    if g.n < Grid::MIN_POINTS {
        return Err(Error::Grid(format!("n = {} is below {}", g.n, Grid::MIN_POINTS)));
    }
    let v = &f.values;
    let n = v.len();
    let h = g.h();
    let mut out = vec![0.0; n];
    match order {
        1 => {
            let s = 1.0 / (12.0 * h);
            for i in [2, n - 3] {
                out[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) * s;
            }
            let s6 = 1.0 / (60.0 * h);
            for i in 3..n - 3 {
                out[i] =
                    (-v[i - 3] + 9.0 * v[i - 2] - 45.0 * v[i - 1] + 45.0 * v[i + 1] - 9.0 * v[i + 2] + v[i + 3]) * s6;
            }
            let fwd0 = |w: &[f64]| (-25.0 * w[0] + 48.0 * w[1] - 36.0 * w[2] + 16.0 * w[3] - 3.0 * w[4]) * s;
            let fwd1 = |w: &[f64]| (-3.0 * w[0] - 10.0 * w[1] + 18.0 * w[2] - 6.0 * w[3] + w[4]) * s;
            let rev: Vec<f64> = v[n - 5..].iter().rev().copied().collect();
            out[0] = fwd0(&v[..5]);
            out[1] = fwd1(&v[..5]);
            out[n - 1] = -fwd0(&rev);
            out[n - 2] = -fwd1(&rev);
        }
        2 => {
            let s = 1.0 / (12.0 * h * h);
            for i in 2..n - 2 {
                out[i] = (-v[i - 2] + 16.0 * v[i - 1] - 30.0 * v[i] + 16.0 * v[i + 1] - v[i + 2]) * s;
            }
            let fwd0 =
                |w: &[f64]| (45.0 * w[0] - 154.0 * w[1] + 214.0 * w[2] - 156.0 * w[3] + 61.0 * w[4] - 10.0 * w[5]) * s;
            let fwd1 = |w: &[f64]| (10.0 * w[0] - 15.0 * w[1] - 4.0 * w[2] + 14.0 * w[3] - 6.0 * w[4] + w[5]) * s;
            let rev: Vec<f64> = v[n - 6..].iter().rev().copied().collect();
            out[0] = fwd0(&v[..6]);
            out[1] = fwd1(&v[..6]);
            out[n - 1] = fwd0(&rev);
            out[n - 2] = fwd1(&rev);
        }
        _ => {
            return Err(Error::Parameter {
                field: "order".into(),
                value: f64::from(order),
                bound: "1 or 2".into(),
            })
        }
    }
    if let Some(a) = f.support_radius {
        for (i, o) in out.iter_mut().enumerate() {
            if g.node(i).abs() > a {
                *o = 0.0;
            }
        }
    }
    SampledFunction::new(g, out, f.support_radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(Grid::new(0.0, 1.0, 8), Err(Error::Grid(_))));
        assert!(matches!(Grid::new(0.0, 1.0, 100), Err(Error::Grid(_))));
        assert!(Grid::new(0.0, 1.0, 16).is_ok());
    }

    #[test]
    fn nodes_span_the_interval() {
        let g = Grid::new(1.0, 2.0, 16).unwrap();
        assert_eq!(g.node(0), -1.0);
        assert_eq!(g.node(16), 3.0);
        assert_eq!(g.h(), 0.25);
        assert_eq!(g.nearest(1.1), Some(8));
        assert_eq!(g.nearest(5.0), None);
    }

    #[test]
    fn polynomials_are_differentiated_exactly() {
        let g = Grid::new(0.0, 1.0, 32).unwrap();
        let p = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x - 0.25 * x.powi(4);
        let dp = |x: f64| -2.0 + 1.5 * x * x - x.powi(3);
        let d2p = |x: f64| 3.0 * x - 3.0 * x * x;
        let f = SampledFunction::new(g, g.nodes().into_iter().map(p).collect(), None).unwrap();
        let d1 = differentiate(&f, 1).unwrap();
        let d2 = differentiate(&f, 2).unwrap();
        for (i, x) in g.nodes().into_iter().enumerate() {
            assert!((d1.values[i] - dp(x)).abs() < 1e-11, "x={x}");
            assert!((d2.values[i] - d2p(x)).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn zero_stays_zero() {
        let g = Grid::new(0.0, 1.0, 16).unwrap();
        let f = SampledFunction::new(g, vec![0.0; 17], Some(0.5)).unwrap();
        assert!(differentiate(&f, 2).unwrap().values.iter().all(|&v| v == 0.0));
        assert!(differentiate(&f, 3).is_err());
    }
}
