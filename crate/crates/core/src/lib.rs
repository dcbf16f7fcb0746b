//! Infinitesimal generators of one-dimensional Levy processes.
//!
//! The generator is realised three ways: the jump-integral form
//! `½Af'' + γf' + ∫(f(x+y) - f(x) - yf'(x)1_{|y|<=1}) ν(dy)`, the convolution
//! form `(d/dx) S (d/dx) f` with `Sf = ½Af + ∫ k(y-x) f(y) dy`, and the Fourier
//! multiplier `-λ` of the Levy-Khinchine exponent. [`verification`] checks them
//! against each other and against Monte-Carlo estimates of the semigroup.

pub mod error;
pub mod generator_ops;
pub mod levy_model;
pub mod quadrature;
pub mod tail_kernels;
pub mod verification;

pub use error::{Error, Result};
pub use levy_model::{
    char_exponent, make_preset, validate_triplet, Atom, JumpComponent, LevyMeasure, LevyTriplet, PresetKind,
    ProcessPreset, Side,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
