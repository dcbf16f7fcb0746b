//! The convolution form `Lf = (d/dx) S (d/dx) f`, `Sg = ½Ag + ∫ k(y - x) g(y) dy`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::{differentiate, Grid, SampledFunction};
use super::test_functions::TestFunction;
use crate::error::{Error, Result};
use crate::tail_kernels::{corrected_weights, AssembledKernel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvolutionMethod {
    /// Zero-padded cyclic convolution through the FFT.
    Fft,
    /// Explicit sums; quadratic cost, used as a cross-check.
    Direct,
}

/// How `f'` enters the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    ClosedForm,
    /// Fourth-order differences of the sampled `f`.
    Numeric,
}

/// Discretised `S` on a fixed grid: weights `W_j`, `j = -n..=n`, and their spectrum.
pub struct ConvolutionOperator {
    grid: Grid,
    diffusion: f64,
    weights: Vec<f64>,
    spectrum: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl ConvolutionOperator {
    pub fn new(k: &AssembledKernel, diffusion: f64, grid: Grid) -> Result<Self> {
        let n = grid.n;
        let weights = if k.is_zero() {
            vec![0.0; 2 * n + 1]
        } else {
            corrected_weights(k, grid.h(), n)?
        };
        let len = 4 * n;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        // y_i = Σ_m g_m W_{m-i} is a convolution of g with V_d = W_{-d}.
        let mut spectrum = vec![Complex64::new(0.0, 0.0); len];
        for d in -(n as i64)..=(n as i64) {
            let slot = d.rem_euclid(len as i64) as usize;
            spectrum[slot] = Complex64::new(weights[(n as i64 - d) as usize], 0.0);
        }
        forward.process(&mut spectrum);
        Ok(Self {
            grid,
            diffusion,
            weights,
            spectrum,
            forward,
            inverse,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `W_j` indexed by `j + n`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ_m g_m W_{m-i}` at every node.
    pub fn convolve(&self, g: &[f64], method: ConvolutionMethod) -> Vec<f64> {
        let n = self.grid.n;
        match method {
            ConvolutionMethod::Direct => (0..=n)
                .map(|i| {
                    g.iter()
                        .enumerate()
                        .filter(|(_, v)| **v != 0.0)
                        .map(|(m, v)| v * self.weights[m + n - i])
                        .sum()
                })
                .collect(),
            ConvolutionMethod::Fft => {
                let len = self.spectrum.len();
                let mut buf = vec![Complex64::new(0.0, 0.0); len];
                for (b, v) in buf.iter_mut().zip(g) {
                    b.re = *v;
                }
                self.forward.process(&mut buf);
                for (b, s) in buf.iter_mut().zip(&self.spectrum) {
                    *b *= s;
                }
                self.inverse.process(&mut buf);
                let scale = 1.0 / len as f64;
                buf[..=n].iter().map(|c| c.re * scale).collect()
            }
        }
    }

    /// Applies `(d/dx) S` to samples of `g = f'` supported on `support`.
    pub fn apply_to_derivative(
        &self,
        g: &[f64],
        support: (f64, f64),
        method: ConvolutionMethod,
    ) -> Result<SampledFunction> {
        let grid = self.grid;
        let radius = (support.1 - grid.center).max(grid.center - support.0);
        let reach = radius + 1.0;
        if radius + reach >= grid.half_width {
            return Err(Error::Support(format!(
                "support radius {radius} plus kernel reach {reach} is not below half width {}",
                grid.half_width
            )));
        }
        let conv = self.convolve(g, method);
        let values: Vec<f64> = conv.iter().zip(g).map(|(c, v)| 0.5 * self.diffusion * v + c).collect();
        let mid = SampledFunction::new(grid, values, None)?;
        differentiate(&mid, 1)
    }

    pub fn apply(&self, f: &dyn TestFunction) -> Result<SampledFunction> {
        self.apply_with(f, Derivative::ClosedForm, ConvolutionMethod::Fft)
    }

    pub fn apply_with(
        &self,
        f: &dyn TestFunction,
        derivative: Derivative,
        method: ConvolutionMethod,
    ) -> Result<SampledFunction> {
        let g = match derivative {
            Derivative::ClosedForm => f.sample(&self.grid, 1)?,
            Derivative::Numeric => differentiate(&f.sample(&self.grid, 0)?, 1)?,
        };
        self.apply_to_derivative(&g.values, f.support(), method)
    }
}

/// Convolution form of the generator on `grid`.
pub fn apply_convolution(
    k: &AssembledKernel,
    diffusion: f64,
    f: &dyn TestFunction,
    grid: &Grid,
) -> Result<SampledFunction> {
    ConvolutionOperator::new(k, diffusion, *grid)?.apply(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator_ops::test_functions::TestFamily;
    use crate::levy_model::LevyTriplet;
    use crate::tail_kernels::assemble_kernel;

    #[test]
    fn fft_and_direct_agree() {
        let t = LevyTriplet::drift(1.0).unwrap();
        let k = assemble_kernel(&t).unwrap();
        let g = Grid::new(0.0, 8.0, 64).unwrap();
        let op = ConvolutionOperator::new(&k, 0.0, g).unwrap();
        let f = TestFamily::sine_bump(0.0, 2.0, 1.5);
        let a = op
            .apply_with(&f, Derivative::ClosedForm, ConvolutionMethod::Fft)
            .unwrap();
        let b = op
            .apply_with(&f, Derivative::ClosedForm, ConvolutionMethod::Direct)
            .unwrap();
        assert!(a.max_abs_diff(&b) < 1e-13);
    }

    #[test]
    fn drift_kernel_reproduces_first_derivative() {
        let k = assemble_kernel(&LevyTriplet::drift(1.0).unwrap()).unwrap();
        let g = Grid::new(0.0, 20.0, 4096).unwrap();
        let f = TestFamily::gaussian_bump(0.0, 2.0);
        let out = apply_convolution(&k, 0.0, &f, &g).unwrap();
        let err = g
            .nodes()
            .iter()
            .zip(&out.values)
            .fold(0.0_f64, |m, (x, v)| m.max((v - f.jet(*x)[1]).abs()));
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn brownian_is_half_second_derivative() {
        let k = assemble_kernel(&LevyTriplet::brownian(1.0).unwrap()).unwrap();
        let g = Grid::new(0.0, 20.0, 4096).unwrap();
        let f = TestFamily::polynomial_bump(0.5, 2.5);
        let out = apply_convolution(&k, 1.0, &f, &g).unwrap();
        let err = g
            .nodes()
            .iter()
            .zip(&out.values)
            .fold(0.0_f64, |m, (x, v)| m.max((v - 0.5 * f.jet(*x)[2]).abs()));
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn padding_is_enforced() {
        let k = assemble_kernel(&LevyTriplet::drift(1.0).unwrap()).unwrap();
        let g = Grid::new(0.0, 4.0, 64).unwrap();
        let e = apply_convolution(&k, 0.0, &TestFamily::gaussian_bump(0.0, 2.0), &g).unwrap_err();
        assert!(matches!(e, Error::Support(_)));
    }
}
