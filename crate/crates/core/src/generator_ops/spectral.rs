//! Fourier-multiplier oracle: the mode `e^{iωx}` is mapped to `-λ(ω) e^{iωx}`.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::grid::{Grid, SampledFunction};
use super::test_functions::TestFunction;
use crate::error::{Error, Result};
use crate::levy_model::{char_exponent_with, ExponentRoute, LevyTriplet};

/// Relative spectral energy allowed in the top tenth of resolved frequencies.
pub const ALIASING_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct SpectralOptions {
    /// The transform length is `pad_factor * n`; a power of two.
    pub pad_factor: usize,
    pub route: ExponentRoute,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            pad_factor: 16,
            route: ExponentRoute::Auto,
        }
    }
}

pub fn apply_spectral(t: &LevyTriplet, f: &dyn TestFunction, grid: &Grid) -> Result<SampledFunction> {
    apply_spectral_with(t, f, grid, SpectralOptions::default())
}

pub fn apply_spectral_with(
    t: &LevyTriplet,
    f: &dyn TestFunction,
    grid: &Grid,
    opts: SpectralOptions,
) -> Result<SampledFunction> {
    if !opts.pad_factor.is_power_of_two() {
        return Err(Error::Parameter {
            field: "pad_factor".into(),
            value: opts.pad_factor as f64,
            bound: "power of two".into(),
        });
    }
    let sampled = f.sample(grid, 0)?;
    let n = grid.n;
    let len = opts.pad_factor * n;
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (b, v) in buf.iter_mut().zip(&sampled.values) {
        b.re = *v;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut buf);

    let half = len / 2;
    let total: f64 = buf.iter().map(|c| c.norm_sqr()).sum();
    if total > 0.0 {
        let cutoff = (0.9 * half as f64) as usize;
        let high: f64 = buf
            .iter()
            .enumerate()
            .filter(|(k, _)| (*k).min(len - *k) > cutoff)
            .map(|(_, c)| c.norm_sqr())
            .sum();
        let fraction = high / total;
        if fraction > ALIASING_THRESHOLD {
            return Err(Error::Resolution {
                high_frequency_fraction: fraction,
            });
        }
    }

    let dw = 2.0 * std::f64::consts::PI / (len as f64 * grid.h());
    let symbols = (0..=half)
        .into_par_iter()
        .map(|k| char_exponent_with(t, k as f64 * dw, opts.route).map(|l| -l))
        .collect::<Result<Vec<Complex64>>>()?;
    for (k, b) in buf.iter_mut().enumerate() {
        let m = if k < half {
            symbols[k]
        } else if k == half {
            Complex64::new(symbols[k].re, 0.0)
        } else {
            symbols[len - k].conj()
        };
        *b *= m;
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let scale = 1.0 / len as f64;
    let values = buf[..=n].iter().map(|c| c.re * scale).collect();
    SampledFunction::new(*grid, values, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator_ops::test_functions::TestFamily;

    #[test]
    fn local_generators_to_spectral_accuracy() {
        let g = Grid::new(0.0, 20.0, 4096).unwrap();
        let f = TestFamily::gaussian_bump(0.0, 2.0);
        let b = apply_spectral(&LevyTriplet::brownian(1.0).unwrap(), &f, &g).unwrap();
        let d = apply_spectral(&LevyTriplet::drift(1.0).unwrap(), &f, &g).unwrap();
        for (i, x) in g.nodes().into_iter().enumerate() {
            let j = f.jet(x);
            assert!((b.values[i] - 0.5 * j[2]).abs() < 1e-10, "x={x}");
            assert!((d.values[i] - j[1]).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn coarse_grid_is_flagged() {
        let g = Grid::new(0.0, 20.0, 16).unwrap();
        let e = apply_spectral(
            &LevyTriplet::brownian(1.0).unwrap(),
            &TestFamily::gaussian_bump(0.3, 3.0),
            &g,
        )
        .unwrap_err();
        assert!(matches!(e, Error::Resolution { .. }));
    }
}
