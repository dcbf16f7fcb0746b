use serde::Serialize;

use super::measure::{LevyMeasure, Side};
use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};

/// Levy-Khinchine data `(A, γ, ν)`.
#[derive(Clone, Debug)]
pub struct LevyTriplet {
    /// Gaussian coefficient `A >= 0`.
    pub diffusion: f64,
    /// Drift `γ`.
    pub gamma: f64,
    pub measure: LevyMeasure,
}

impl LevyTriplet {
    pub fn new(diffusion: f64, gamma: f64, measure: LevyMeasure) -> Result<Self> {
        if !(diffusion >= 0.0 && diffusion.is_finite()) {
            return Err(Error::Parameter {
                field: "a".into(),
                value: diffusion,
                bound: "finite A >= 0".into(),
            });
        }
        if !gamma.is_finite() {
            return Err(Error::Parameter {
                field: "gamma".into(),
                value: gamma,
                bound: "finite real".into(),
            });
        }
        Ok(Self {
            diffusion,
            gamma,
            measure,
        })
    }

    pub fn brownian(diffusion: f64) -> Result<Self> {
        Self::new(diffusion, 0.0, LevyMeasure::empty())
    }

    pub fn drift(gamma: f64) -> Result<Self> {
        Self::new(0.0, gamma, LevyMeasure::empty())
    }

    /// Triplet of the sum of two independent processes.
    pub fn sum(&self, other: &LevyTriplet) -> LevyTriplet {
        LevyTriplet {
            diffusion: self.diffusion + other.diffusion,
            gamma: self.gamma + other.gamma,
            measure: self.measure.sum(&other.measure),
        }
    }
}

/// Outcome of [`validate_triplet`].
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub domain_radius: f64,
    /// `∫_{-R}^{R} x²/(1+x²) ν(dx)`, atoms included.
    pub integral: f64,
    /// Upper bound on the part of the same integral outside `[-R, R]`.
    pub tail_estimate: f64,
    pub diffusion_nonnegative: bool,
    pub near_zero_order: f64,
    pub near_zero_order_ok: bool,
    pub valid: bool,
}

/// Checks `A >= 0`, `ρ < 2` and finiteness of `∫ x²/(1+x²) ν(dx)` over `[-R, R]`.
pub fn validate_triplet(t: &LevyTriplet, domain_radius: f64) -> Result<ValidationReport> {
    if !(domain_radius > 0.0 && domain_radius.is_finite()) {
        return Err(Error::Parameter {
            field: "domain_radius".into(),
            value: domain_radius,
            bound: "R > 0".into(),
        });
    }
    let m = &t.measure;
    let order = m.near_zero_order();
    if order >= 2.0 {
        return Err(Error::InvalidMeasure {
            x: 0.0,
            reason: format!("near-zero order {order} >= 2 violates x²/(1+x²) integrability"),
        });
    }
    let mut integral = 0.0;
    for side in [Side::Minus, Side::Plus] {
        let s = side.sign();
        let g = |x: f64| {
            let d = m.density(s * x);
            x * x / (1.0 + x * x) * d
        };
        // Probe for non-finite samples before integrating.
        for k in 0..64 {
            let x = domain_radius * 2f64.powi(-k);
            if !m.density(s * x).is_finite() {
                return Err(Error::InvalidMeasure {
                    x: s * x,
                    reason: "density sample is not finite".into(),
                });
            }
        }
        let (v, _) = quadrature::integrate_log_from_zero(g, domain_radius, Tolerance::KERNEL, "x²/(1+x²) ν(dx)")?;
        if !v.is_finite() {
            return Err(Error::Integrability {
                what: "x²/(1+x²) ν(dx)".into(),
                value: v,
            });
        }
        integral += v;
    }
    integral += m
        .atoms()
        .iter()
        .filter(|a| a.location.abs() <= domain_radius)
        .map(|a| a.location * a.location / (1.0 + a.location * a.location) * a.mass)
        .sum::<f64>();
    let tail_estimate = m.mass_beyond(domain_radius)?;
    let diffusion_nonnegative = t.diffusion >= 0.0;
    let near_zero_order_ok = order < 2.0;
    Ok(ValidationReport {
        domain_radius,
        integral,
        tail_estimate,
        diffusion_nonnegative,
        near_zero_order: order,
        near_zero_order_ok,
        valid: diffusion_nonnegative && near_zero_order_ok && integral.is_finite() && tail_estimate.is_finite(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy_model::measure::JumpComponent;

    #[test]
    fn brownian_has_zero_integral() {
        let r = validate_triplet(&LevyTriplet::brownian(1.0).unwrap(), 10.0).unwrap();
        assert!(r.valid);
        assert_eq!(r.integral, 0.0);
        assert_eq!(r.tail_estimate, 0.0);
    }

    #[test]
    fn stable_integral_matches_mellin_oracle() {
        // ∫_0^∞ x^{-1/2}/(1+x²) dx = π/√2, so the full-line value is π√2; the
        // part beyond R is (2/3)R^{-3/2} - (2/7)R^{-7/2} + O(R^{-11/2}) per side.
        let m = LevyMeasure::new(vec![JumpComponent::SymmetricStable { c: 1.0, alpha: 1.5 }], vec![]).unwrap();
        let t = LevyTriplet::new(0.0, 0.0, m).unwrap();
        let r_dom = 1e4;
        let r = validate_triplet(&t, r_dom).unwrap();
        let tail = 2.0 / 3.0 * r_dom.powf(-1.5) - 2.0 / 7.0 * r_dom.powf(-3.5);
        let expected = std::f64::consts::PI * std::f64::consts::SQRT_2 - 2.0 * tail;
        assert!((r.integral - expected).abs() < 1e-10, "{} vs {}", r.integral, expected);
        assert!(r.valid);
        assert!((r.tail_estimate - 4.0 / 3.0 * r_dom.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn negative_diffusion_is_rejected() {
        assert!(matches!(
            LevyTriplet::new(-1.0, 0.0, LevyMeasure::empty()),
            Err(Error::Parameter { .. })
        ));
        assert!(matches!(
            validate_triplet(&LevyTriplet::drift(1.0).unwrap(), 0.0),
            Err(Error::Parameter { .. })
        ));
    }
}
