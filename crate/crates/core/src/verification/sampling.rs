//! Exact increment samplers for the simulable presets.
//!
//! Stream layout: samples are produced in chunks of [`CHUNK`]. Chunk `c` of a
//! draw tagged `tag` uses `ChaCha8Rng::seed_from_u64(seed)` switched to stream
//! `(tag << 40) | c`, so results do not depend on the number of workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::levy_model::{stable_constant, PresetKind, ProcessPreset};

pub const CHUNK: usize = 65_536;

/// Stream tags used by the checks in this crate.
pub mod tags {
    pub const INCREMENT: u64 = 0;
    pub const HALF_STEP: u64 = 1;
    pub const PATH: u64 = 2;
}

#[derive(Debug, Clone, Copy)]
enum Jumps {
    None,
    Gaussian {
        rate: f64,
        mean: f64,
        sd: f64,
    },
    Bilateral {
        rate: f64,
        p_up: f64,
        scale: f64,
    },
    /// `E exp(izX_t) = exp(-t K |z|^α)`.
    Stable {
        alpha: f64,
        k: f64,
    },
}

#[derive(Debug, Clone, Copy)]
struct Law {
    diffusion: f64,
    gamma: f64,
    jumps: Jumps,
}

/// Reproducible sampler of `X_t` for one preset.
#[derive(Debug, Clone, Serialize)]
pub struct IncrementSampler {
    pub preset: String,
    /// Always true for the built-in samplers.
    pub exact: bool,
    pub seed: u64,
    #[serde(skip)]
    law: Law,
}

impl IncrementSampler {
    pub fn new(preset: &ProcessPreset, seed: u64) -> Result<Self> {
        let v = preset.resolved()?;
        let jumps = match preset.kind {
            PresetKind::Brownian | PresetKind::Drift => Jumps::None,
            PresetKind::CompoundPoissonGaussian => Jumps::Gaussian {
                rate: v["rate"],
                mean: v["jump_mean"],
                sd: v["jump_sd"],
            },
            PresetKind::CompoundPoissonBilateralExponential => Jumps::Bilateral {
                rate: v["rate"],
                p_up: v["p_up"],
                scale: v["scale"],
            },
            PresetKind::SymmetricAlphaStable => Jumps::Stable {
                alpha: v["alpha"],
                k: stable_constant(v["c"], v["alpha"]),
            },
            PresetKind::TemperedStable => {
                return Err(Error::NotSimulable(format!(
                    "{}: no exact increment sampler",
                    preset.kind
                )))
            }
        };
        Ok(Self {
            preset: preset.label(),
            exact: true,
            seed,
            law: Law {
                diffusion: v["a"],
                gamma: v["gamma"],
                jumps,
            },
        })
    }

    pub fn is_heavy_tailed(&self) -> bool {
        matches!(self.law.jumps, Jumps::Stable { .. })
    }

    fn rng(&self, tag: u64, chunk: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((tag << 40) | chunk);
        rng
    }

    /// `count` i.i.d. copies of `X_t` from stream `tag`.
    pub fn sample(&self, t: f64, count: usize, tag: u64) -> Result<Vec<f64>> {
        check_time(t)?;
        if t == 0.0 {
            return Ok(vec![0.0; count]);
        }
        let chunks = count.div_ceil(CHUNK);
        let parts: Vec<Vec<f64>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let len = CHUNK.min(count - c * CHUNK);
                let mut rng = self.rng(tag, c as u64);
                let mut d = Draw::new(&self.law, t);
                (0..len).map(|_| d.increment(&mut rng)).collect()
            })
            .collect();
        Ok(parts.concat())
    }

    /// Pairs `(X_s, X_{s+t} - X_s)` read off simulated paths: the continuous and
    /// stable parts as sums of `steps` sub-increments, compound Poisson jumps
    /// from exponential inter-arrival times.
    pub fn sample_path_pairs(&self, s: f64, t: f64, count: usize, steps: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        check_time(s)?;
        check_time(t)?;
        let steps = steps.max(1);
        let chunks = count.div_ceil(CHUNK);
        let parts: Vec<Vec<(f64, f64)>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let len = CHUNK.min(count - c * CHUNK);
                let mut rng = self.rng(tags::PATH, c as u64);
                // The drift enters once per interval so that drift-only paths are exact.
                let continuous = Law {
                    gamma: 0.0,
                    jumps: match self.law.jumps {
                        j @ Jumps::Stable { .. } => j,
                        _ => Jumps::None,
                    },
                    ..self.law
                };
                let mut ds = Draw::new(&continuous, s / steps as f64);
                let mut dt = Draw::new(&continuous, t / steps as f64);
                (0..len)
                    .map(|_| {
                        let mut xs = (0..steps).map(|_| ds.increment(&mut rng)).sum::<f64>() + self.law.gamma * s;
                        let mut inc = (0..steps).map(|_| dt.increment(&mut rng)).sum::<f64>() + self.law.gamma * t;
                        if let Some(rate) = self.jump_rate() {
                            let mut time = 0.0;
                            loop {
                                time += Distribution::<f64>::sample(&Exp1, &mut rng) / rate;
                                if time > s + t {
                                    break;
                                }
                                let j = self.jump_size(&mut rng);
                                if time <= s {
                                    xs += j;
                                } else {
                                    inc += j;
                                }
                            }
                        }
                        (xs, inc)
                    })
                    .collect()
            })
            .collect();
        Ok(parts.concat().into_iter().unzip())
    }

    fn jump_rate(&self) -> Option<f64> {
        match self.law.jumps {
            Jumps::Gaussian { rate, .. } | Jumps::Bilateral { rate, .. } => Some(rate),
            _ => None,
        }
    }

    fn jump_size(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self.law.jumps {
            Jumps::Gaussian { mean, sd, .. } => mean + sd * Distribution::<f64>::sample(&StandardNormal, rng),
            Jumps::Bilateral { p_up, scale, .. } => bilateral(rng, p_up, scale),
            _ => 0.0,
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter {
            field: "t".into(),
            value: t,
            bound: "t >= 0".into(),
        })
    }
}

fn bilateral(rng: &mut ChaCha8Rng, p_up: f64, scale: f64) -> f64 {
    let e: f64 = Exp1.sample(rng);
    if rng.random::<f64>() < p_up {
        scale * e
    } else {
        -scale * e
    }
}

/// Chambers-Mallows-Stuck draw with `E exp(izX) = exp(-|z|^α)`.
fn symmetric_stable(rng: &mut ChaCha8Rng, alpha: f64) -> f64 {
    let v = std::f64::consts::PI * (rng.random::<f64>() - 0.5);
    if (alpha - 1.0).abs() < 1e-12 {
        return v.tan();
    }
    let w: f64 = Exp1.sample(rng);
    (alpha * v).sin() / v.cos().powf(1.0 / alpha) * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Per-chunk state for drawing `X_t` at a fixed `t`.
struct Draw {
    shift: f64,
    sigma: f64,
    poisson: Option<Poisson<f64>>,
    law: Law,
    stable_scale: f64,
}

impl Draw {
    fn new(law: &Law, t: f64) -> Self {
        let (poisson, stable_scale) = match law.jumps {
            Jumps::Gaussian { rate, .. } | Jumps::Bilateral { rate, .. } if rate * t > 0.0 => {
                (Poisson::new(rate * t).ok(), 0.0)
            }
            Jumps::Stable { alpha, k } => (None, (t * k).powf(1.0 / alpha)),
            _ => (None, 0.0),
        };
        Self {
            shift: law.gamma * t,
            sigma: (law.diffusion * t).sqrt(),
            poisson,
            law: *law,
            stable_scale,
        }
    }

    fn increment(&mut self, rng: &mut ChaCha8Rng) -> f64 {
        let mut x = self.shift;
        if self.sigma > 0.0 {
            x += self.sigma * Distribution::<f64>::sample(&StandardNormal, rng);
        }
        match self.law.jumps {
            Jumps::None => {}
            Jumps::Gaussian { mean, sd, .. } => {
                if let Some(p) = &self.poisson {
                    let k = p.sample(rng);
                    if k > 0.0 {
                        x += k * mean + k.sqrt() * sd * Distribution::<f64>::sample(&StandardNormal, rng);
                    }
                }
            }
            Jumps::Bilateral { p_up, scale, .. } => {
                if let Some(p) = &self.poisson {
                    let k = p.sample(rng) as u64;
                    for _ in 0..k {
                        x += bilateral(rng, p_up, scale);
                    }
                }
            }
            Jumps::Stable { alpha, .. } => x += self.stable_scale * symmetric_stable(rng, alpha),
        }
        x
    }
}

/// `count` samples of `X_t` with stream tag [`tags::INCREMENT`].
pub fn simulate_increment(s: &IncrementSampler, t: f64, count: usize) -> Result<Vec<f64>> {
    s.sample(t, count, tags::INCREMENT)
}
