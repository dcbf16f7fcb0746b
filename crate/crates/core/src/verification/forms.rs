//! Cross-validation of the three generator backends.

use std::time::Instant;

use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::generator_ops::{apply_ito, apply_spectral, ConvolutionOperator, Grid, SampledFunction, TestFunction};
use crate::levy_model::LevyTriplet;
use crate::tail_kernels::assemble_kernel;

/// Default relative sup-norm tolerance for backend agreement.
pub const FORMS_TOLERANCE: f64 = 1e-3;

/// The three backends evaluated on one grid.
#[derive(Debug, Clone)]
pub struct ThreeForms {
    pub ito: SampledFunction,
    pub convolution: SampledFunction,
    pub spectral: SampledFunction,
}

impl ThreeForms {
    /// `(conv vs ito, spectral vs ito, conv vs spectral)`, each divided by `sup|L_ito f|`.
    pub fn relative_differences(&self) -> [f64; 3] {
        let scale = self.ito.sup_norm().max(f64::MIN_POSITIVE);
        [
            self.convolution.max_abs_diff(&self.ito) / scale,
            self.spectral.max_abs_diff(&self.ito) / scale,
            self.convolution.max_abs_diff(&self.spectral) / scale,
        ]
    }
}

/// Outcome of [`compare_forms`]; `finest` holds the backend outputs on the last
/// grid of the ladder, one entry per family.
#[derive(Debug, Clone)]
pub struct FormsComparison {
    pub report: VerificationReport,
    pub finest: Vec<ThreeForms>,
}

/// Evaluates all backends for every `(family, grid)` pair. Rows hold the three
/// pairwise relative sup differences; the verdict uses the two comparisons
/// against the Itô backend on the finest grid. Metrics record the smallest
/// empirical convergence order `log2(e_n / e_2n)` of the convolution error.
pub fn compare_forms(
    t: &LevyTriplet,
    families: &[&dyn TestFunction],
    grids: &[Grid],
    tolerance: f64,
) -> Result<FormsComparison> {
    let started = Instant::now();
    if grids.is_empty() || families.is_empty() {
        return Err(Error::Grid(
            "compare_forms needs at least one grid and one family".into(),
        ));
    }
    let kernel = assemble_kernel(t)?;
    let names: Vec<String> = families.iter().map(|f| f.describe()).collect();
    let mut report = VerificationReport::new(
        "compare_forms",
        format!(
            "A = {}, γ = {}, families [{}], n = {:?}",
            t.diffusion,
            t.gamma,
            names.join("; "),
            grids.iter().map(|g| g.n).collect::<Vec<_>>()
        ),
        &["family", "n", "conv_vs_ito", "spec_vs_ito", "conv_vs_spec"],
    );
    let mut finest = Vec::new();
    let mut conv_errors = vec![Vec::new(); families.len()];
    for (gi, grid) in grids.iter().enumerate() {
        let op = ConvolutionOperator::new(&kernel, t.diffusion, *grid)?;
        for (fi, f) in families.iter().enumerate() {
            let forms = ThreeForms {
                ito: apply_ito(t, *f, grid)?,
                convolution: op.apply(*f)?,
                spectral: apply_spectral(t, *f, grid)?,
            };
            let d = forms.relative_differences();
            report.rows.push(vec![fi as f64, grid.n as f64, d[0], d[1], d[2]]);
            conv_errors[fi].push(d[0]);
            if gi + 1 == grids.len() {
                finest.push(forms);
            }
        }
    }
    let mut min_order = f64::INFINITY;
    let mut monotone = true;
    for e in &conv_errors {
        for w in e.windows(2) {
            monotone &= w[1] < w[0];
            min_order = min_order.min((w[0] / w[1]).log2());
        }
    }
    if grids.len() > 1 {
        report.metrics.insert("min_convolution_order".into(), min_order);
        report
            .metrics
            .insert("convolution_monotone".into(), f64::from(u8::from(monotone)));
    }
    for (fi, name) in names.iter().enumerate() {
        report.notes.push(format!("family {fi}: {name}"));
    }
    let last = grids.len() - 1;
    let errors: Vec<f64> = report
        .rows
        .iter()
        .skip(last * families.len())
        .flat_map(|r| [r[2], r[3]])
        .collect();
    Ok(FormsComparison {
        report: report.finish(&errors, tolerance, started),
        finest,
    })
}
