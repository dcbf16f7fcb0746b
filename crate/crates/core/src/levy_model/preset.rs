//! Named process families and their parameter schemas.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::measure::{JumpComponent, LevyMeasure};
use super::triplet::LevyTriplet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetKind {
    Brownian,
    Drift,
    CompoundPoissonGaussian,
    CompoundPoissonBilateralExponential,
    SymmetricAlphaStable,
    TemperedStable,
}

impl PresetKind {
    pub const ALL: [PresetKind; 6] = [
        PresetKind::Brownian,
        PresetKind::Drift,
        PresetKind::CompoundPoissonGaussian,
        PresetKind::CompoundPoissonBilateralExponential,
        PresetKind::SymmetricAlphaStable,
        PresetKind::TemperedStable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresetKind::Brownian => "brownian",
            PresetKind::Drift => "drift",
            PresetKind::CompoundPoissonGaussian => "compound_poisson_gaussian",
            PresetKind::CompoundPoissonBilateralExponential => "compound_poisson_bilateral_exponential",
            PresetKind::SymmetricAlphaStable => "symmetric_alpha_stable",
            PresetKind::TemperedStable => "tempered_stable",
        }
    }

    /// Whether an exact increment sampler exists.
    pub fn simulable(self) -> bool {
        !matches!(self, PresetKind::TemperedStable)
    }

    pub fn schema(self) -> Vec<ParamSpec> {
        let a = |default| ParamSpec::new("a", default, "a >= 0", |v| v >= 0.0);
        let g = |default| ParamSpec::new("gamma", default, "finite", |_| true);
        let rate = ParamSpec::new("rate", 1.0, "rate > 0", |v| v > 0.0);
        match self {
            PresetKind::Brownian => vec![a(1.0), g(0.0)],
            PresetKind::Drift => vec![a(0.0), g(1.0)],
            PresetKind::CompoundPoissonGaussian => vec![
                a(0.0),
                g(0.0),
                rate,
                ParamSpec::new("jump_mean", 0.0, "finite", |_| true),
                ParamSpec::new("jump_sd", 1.0, "jump_sd > 0", |v| v > 0.0),
            ],
            PresetKind::CompoundPoissonBilateralExponential => vec![
                a(0.0),
                g(0.0),
                rate,
                ParamSpec::new("scale", 1.0, "scale > 0", |v| v > 0.0),
                ParamSpec::new("p_up", 0.5, "0 <= p_up <= 1", |v| (0.0..=1.0).contains(&v)),
            ],
            PresetKind::SymmetricAlphaStable => vec![
                a(0.0),
                g(0.0),
                ParamSpec::new("alpha", 1.5, "0 < alpha < 2", |v| v > 0.0 && v < 2.0),
                ParamSpec::new("c", 1.0, "c > 0", |v| v > 0.0),
            ],
            PresetKind::TemperedStable => vec![
                a(0.0),
                g(0.0),
                ParamSpec::new("alpha", 1.5, "0 < alpha < 2", |v| v > 0.0 && v < 2.0),
                ParamSpec::new("c", 1.0, "c > 0", |v| v > 0.0),
                ParamSpec::new("theta", 1.0, "theta >= 0", |v| v >= 0.0),
            ],
        }
    }
}

impl fmt::Display for PresetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PresetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PresetKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

#[derive(Clone, Copy, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub bound: &'static str,
    #[serde(skip)]
    check: fn(f64) -> bool,
}

impl fmt::Debug for ParamSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (default {}, {})", self.name, self.default, self.bound)
    }
}

impl ParamSpec {
    fn new(name: &'static str, default: f64, bound: &'static str, check: fn(f64) -> bool) -> Self {
        Self {
            name,
            default,
            bound,
            check,
        }
    }
}

/// A preset name plus parameter overrides; unspecified parameters take schema defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessPreset {
    pub kind: PresetKind,
    pub params: BTreeMap<String, f64>,
}

impl ProcessPreset {
    pub fn new(kind: PresetKind) -> Self {
        Self {
            kind,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    /// Every schema parameter, with defaults filled in and ranges checked.
    pub fn resolved(&self) -> Result<BTreeMap<&'static str, f64>> {
        let schema = self.kind.schema();
        for key in self.params.keys() {
            if !schema.iter().any(|p| p.name == key) {
                return Err(Error::UnknownParameter {
                    preset: self.kind.name().to_string(),
                    field: key.clone(),
                });
            }
        }
        let mut out = BTreeMap::new();
        for param in schema {
            let v = self.params.get(param.name).copied().unwrap_or(param.default);
            if !v.is_finite() || !(param.check)(v) {
                return Err(Error::Parameter {
                    field: param.name.to_string(),
                    value: v,
                    bound: param.bound.to_string(),
                });
            }
            out.insert(param.name, v);
        }
        Ok(out)
    }

    pub fn label(&self) -> String {
        match self.resolved() {
            Ok(p) => {
                let parts: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("{}({})", self.kind.name(), parts.join(", "))
            }
            Err(_) => self.kind.name().to_string(),
        }
    }
}

/// Builds the Levy triplet of a preset.
pub fn make_preset(p: &ProcessPreset) -> Result<LevyTriplet> {
    let v = p.resolved()?;
    let component = match p.kind {
        PresetKind::Brownian | PresetKind::Drift => None,
        PresetKind::CompoundPoissonGaussian => Some(JumpComponent::Gaussian {
            rate: v["rate"],
            mean: v["jump_mean"],
            sd: v["jump_sd"],
        }),
        PresetKind::CompoundPoissonBilateralExponential => Some(JumpComponent::BilateralExponential {
            rate: v["rate"],
            p_up: v["p_up"],
            scale: v["scale"],
        }),
        PresetKind::SymmetricAlphaStable => Some(JumpComponent::SymmetricStable {
            c: v["c"],
            alpha: v["alpha"],
        }),
        PresetKind::TemperedStable => Some(JumpComponent::TemperedStable {
            c: v["c"],
            alpha: v["alpha"],
            theta: v["theta"],
        }),
    };
    let measure = LevyMeasure::new(component.into_iter().collect(), Vec::new())?;
    LevyTriplet::new(v["a"], v["gamma"], measure)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brownian_defaults() {
        let t = make_preset(&ProcessPreset::new(PresetKind::Brownian)).unwrap();
        assert_eq!((t.diffusion, t.gamma), (1.0, 0.0));
        assert!(t.measure.is_empty());
    }

    #[test]
    fn gaussian_jumps_have_bounded_density() {
        let t = make_preset(&ProcessPreset::new(PresetKind::CompoundPoissonGaussian)).unwrap();
        assert_eq!(t.measure.near_zero_order(), 0.0);
        let phi0 = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        assert!((t.measure.density(1e-9) - phi0).abs() < 1e-15);
    }

    #[test]
    fn stable_second_moment_near_zero() {
        let t = make_preset(&ProcessPreset::new(PresetKind::SymmetricAlphaStable).with("alpha", 1.5)).unwrap();
        assert_eq!(t.measure.near_zero_order(), 1.5);
        for &d in &[1e-6, 0.01, 0.5, 1.0] {
            let m2 = t.measure.second_moment_near_zero(d).unwrap();
            assert!((m2 - 4.0 * d.sqrt()).abs() < 1e-14 * m2.max(1.0), "δ={d}");
        }
    }

    #[test]
    fn out_of_range_and_unknown_parameters() {
        let e = make_preset(&ProcessPreset::new(PresetKind::SymmetricAlphaStable).with("alpha", 2.0)).unwrap_err();
        match e {
            Error::Parameter { field, bound, .. } => {
                assert_eq!(field, "alpha");
                assert!(bound.contains("< 2"));
            }
            other => panic!("{other:?}"),
        }
        let e = make_preset(&ProcessPreset::new(PresetKind::Brownian).with("sigma", 1.0)).unwrap_err();
        assert!(matches!(e, Error::UnknownParameter { .. }));
        assert!(matches!(
            "levy_flight".parse::<PresetKind>(),
            Err(Error::UnknownPreset(_))
        ));
    }
}
