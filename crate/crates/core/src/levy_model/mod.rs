//! Levy triplets, built-in process families and the Levy-Khinchine exponent.

mod exponent;
mod measure;
mod preset;
mod triplet;

pub use exponent::{char_exponent, char_exponent_with, jump_integral, ExponentRoute};
pub use measure::{stable_constant, Atom, DensityFn, JumpComponent, LevyMeasure, Side};
pub use preset::{make_preset, ParamSpec, PresetKind, ProcessPreset};
pub use triplet::{validate_triplet, LevyTriplet, ValidationReport};
