//! Three realisations of the generator on a uniform grid: the jump-integral
//! form, the convolution form and a Fourier multiplier.

mod convolution;
mod grid;
mod ito;
mod spectral;
mod test_functions;

pub use convolution::{apply_convolution, ConvolutionMethod, ConvolutionOperator, Derivative};
pub use grid::{differentiate, Grid, SampledFunction};
pub use ito::{apply_ito, ito_at, ItoPlan, TAYLOR_BUDGET};
pub use spectral::{apply_spectral, apply_spectral_with, SpectralOptions, ALIASING_THRESHOLD};
pub use test_functions::{FamilyKind, LinearCombination, Shifted, TestFamily, TestFunction};
