//! Property tests of the generator backends and the tail/kernel functions.

use std::sync::Arc;

use approx::assert_relative_eq;
use levygen_core::generator_ops::{
    apply_ito, apply_spectral, ito_at, ConvolutionOperator, Grid, LinearCombination, Shifted, TestFamily, TestFunction,
};
use levygen_core::tail_kernels::{assemble_kernel, corrected_weights};
use levygen_core::verification::{
    check_monotonicity, log_spaced, simulate_increment, IncrementSampler, MonotonicityOptions,
};
use levygen_core::{make_preset, JumpComponent, LevyMeasure, LevyTriplet, PresetKind, ProcessPreset};
use proptest::prelude::*;

fn presets() -> Vec<ProcessPreset> {
    vec![
        ProcessPreset::new(PresetKind::Brownian),
        ProcessPreset::new(PresetKind::Drift),
        ProcessPreset::new(PresetKind::CompoundPoissonGaussian).with("jump_mean", 0.3),
        ProcessPreset::new(PresetKind::CompoundPoissonBilateralExponential).with("p_up", 0.7),
        ProcessPreset::new(PresetKind::SymmetricAlphaStable).with("alpha", 0.7),
        ProcessPreset::new(PresetKind::SymmetricAlphaStable).with("alpha", 1.5),
        ProcessPreset::new(PresetKind::TemperedStable),
    ]
}

fn preset_strategy() -> impl Strategy<Value = ProcessPreset> {
    (0..presets().len()).prop_map(|i| presets()[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ito_form_is_linear(p in preset_strategy(), a in -2.0..2.0f64, b in -2.0..2.0f64, x in -3.0..3.0f64) {
        let t = make_preset(&p).unwrap();
        let f = TestFamily::gaussian_bump(0.2, 1.5);
        let g = TestFamily::sine_bump(-0.3, 2.0, 3.0);
        let combo = LinearCombination { terms: vec![(a, Arc::new(f) as Arc<dyn TestFunction>), (b, Arc::new(g))] };
        let h = 0.01;
        let lhs = ito_at(&t, &combo, x, h).unwrap();
        let rhs = a * ito_at(&t, &f, x, h).unwrap() + b * ito_at(&t, &g, x, h).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-7 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn ito_form_commutes_with_translation(p in preset_strategy(), s in -2.0..2.0f64, x in -3.0..3.0f64) {
        let t = make_preset(&p).unwrap();
        let f = TestFamily::polynomial_bump(0.0, 2.0);
        let shifted = Shifted { inner: f, shift: s };
        let a = ito_at(&t, &shifted, x + s, 0.01).unwrap();
        let b = ito_at(&t, &f, x, 0.01).unwrap();
        prop_assert!((a - b).abs() < 1e-7 * (1.0 + b.abs()), "{a} vs {b}");
    }

    #[test]
    fn tails_and_kernels_are_monotone(alpha in 0.1..1.95f64, c in 0.1..3.0f64, theta in 0.0..4.0f64) {
        for comp in [JumpComponent::SymmetricStable { c, alpha }, JumpComponent::TemperedStable { c, alpha, theta }] {
            let m = LevyMeasure::new(vec![comp], vec![]).unwrap();
            let r = check_monotonicity(&m, &log_spaced(1e-4, 8.0, 40), MonotonicityOptions { strict: true }).unwrap();
            prop_assert!(r.pass, "{:?}", r.notes);
        }
    }

    #[test]
    fn cell_weights_are_finite(alpha in 0.05..1.99f64, theta in 0.0..3.0f64) {
        let m = LevyMeasure::new(vec![JumpComponent::TemperedStable { c: 1.0, alpha, theta }], vec![]).unwrap();
        let t = LevyTriplet::new(0.0, 0.3, m).unwrap();
        let w = corrected_weights(&assemble_kernel(&t).unwrap(), 0.05, 256).unwrap();
        prop_assert!(w.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>(), t in 0.0..2.0f64) {
        let s = IncrementSampler::new(&ProcessPreset::new(PresetKind::CompoundPoissonBilateralExponential), seed).unwrap();
        prop_assert_eq!(simulate_increment(&s, t, 1000).unwrap(), simulate_increment(&s, t, 1000).unwrap());
    }
}

#[test]
fn local_generators_vanish_off_the_support() {
    for p in [
        ProcessPreset::new(PresetKind::Brownian),
        ProcessPreset::new(PresetKind::Drift),
    ] {
        let t = make_preset(&p).unwrap();
        let grid = Grid::new(0.0, 10.0, 512).unwrap();
        let f = TestFamily::gaussian_bump(0.0, 1.0);
        let l = apply_ito(&t, &f, &grid).unwrap();
        for (x, v) in grid.nodes().into_iter().zip(&l.values) {
            if x.abs() > 1.0 {
                assert_eq!(*v, 0.0);
            }
        }
    }
}

#[test]
fn compound_poisson_generator_decays_at_infinity() {
    // Off the support Lf(x) = ∫ f(x + y) ν(dy), bounded by the mass beyond |x| - 1.
    let t = make_preset(&ProcessPreset::new(PresetKind::CompoundPoissonGaussian)).unwrap();
    let f = TestFamily::polynomial_bump(0.0, 1.0);
    let mut prev = f64::INFINITY;
    for x in [3.0, 5.0, 8.0, 12.0] {
        let v = ito_at(&t, &f, x, 0.01).unwrap().abs();
        assert!(v <= prev);
        assert!(v <= t.measure.mass_beyond(x - 1.0).unwrap() + 1e-15);
        prev = v;
    }
    assert!(prev < 1e-25);
}

#[test]
fn brownian_backends_reduce_to_half_second_derivative() {
    let t = LevyTriplet::brownian(1.0).unwrap();
    let grid = Grid::new(0.0, 20.0, 4096).unwrap();
    let f = TestFamily::sine_bump(0.5, 3.0, 2.0);
    let exact: Vec<f64> = grid.nodes().into_iter().map(|x| 0.5 * f.jet(x)[2]).collect();
    let op = ConvolutionOperator::new(&assemble_kernel(&t).unwrap(), 1.0, grid).unwrap();
    for l in [
        apply_ito(&t, &f, &grid).unwrap(),
        op.apply(&f).unwrap(),
        apply_spectral(&t, &f, &grid).unwrap(),
    ] {
        for (a, b) in l.values.iter().zip(&exact) {
            assert_relative_eq!(*a, *b, epsilon = 1e-6);
        }
    }
}
