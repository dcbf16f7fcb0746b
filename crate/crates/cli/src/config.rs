//! Run configuration: one `[job.<name>]` table per job.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use levygen_core::generator_ops::{FamilyKind, Grid, TestFamily};
use levygen_core::{make_preset, PresetKind, ProcessPreset};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobKind {
    ExponentSweep,
    KernelTable,
    CompareForms,
    TheoremChecks,
    McSemigroup,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub center: f64,
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    #[serde(default = "default_n")]
    pub n: usize,
}

fn default_half_width() -> f64 {
    20.0
}

fn default_n() -> usize {
    4096
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            center: 0.0,
            half_width: default_half_width(),
            n: default_n(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    #[serde(default)]
    pub center: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "default_frequency")]
    pub frequency: f64,
}

fn default_width() -> f64 {
    2.0
}

fn default_frequency() -> f64 {
    2.0
}

impl Default for FamilyParams {
    fn default() -> Self {
        Self {
            center: 0.0,
            width: default_width(),
            frequency: default_frequency(),
        }
    }
}

/// One job as written in the file. Fields unused by a kind are ignored.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub kind: JobKind,
    pub preset: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default = "default_family")]
    pub family: String,
    #[serde(default)]
    pub family_params: FamilyParams,
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Output stem as written; `.json` and `.csv` are appended.
    pub output: PathBuf,
    /// `output` resolved against the configuration directory.
    #[serde(skip)]
    pub resolved_output: PathBuf,
    /// compare_forms: grid sizes of the convergence ladder (defaults to `[grid.n]`).
    pub ladder: Option<Vec<usize>>,
    /// theorem_checks: ladder depth.
    pub m_max: Option<u32>,
    /// exponent_sweep and kernel_table: largest `|z|` or `|u|`.
    pub range: Option<f64>,
    /// exponent_sweep and kernel_table: number of points.
    pub points: Option<usize>,
    /// mc_semigroup: evaluation points.
    pub x: Option<Vec<f64>>,
    /// mc_semigroup: time step.
    pub t: Option<f64>,
    /// mc_semigroup: sample count.
    pub count: Option<usize>,
    /// mc_semigroup: largest acceptable standard error.
    pub stderr_budget: Option<f64>,
}

fn default_family() -> String {
    FamilyKind::GaussianBump.name().to_string()
}

impl Job {
    pub fn process(&self) -> ProcessPreset {
        let kind: PresetKind = self.preset.parse().expect("validated preset");
        ProcessPreset {
            kind,
            params: self.params.clone(),
        }
    }

    pub fn test_function(&self) -> TestFamily {
        let kind: FamilyKind = self.family.parse().expect("validated family");
        let p = &self.family_params;
        TestFamily::new(kind, p.center, p.width, p.frequency).expect("validated family parameters")
    }

    pub fn grids(&self) -> Vec<Grid> {
        let g = &self.grid;
        self.ladder
            .clone()
            .unwrap_or_else(|| vec![g.n])
            .into_iter()
            .map(|n| Grid::new(g.center, g.half_width, n).expect("validated grid"))
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub job: BTreeMap<String, Job>,
}

impl RunConfig {
    /// Parses and validates; relative output paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.job.is_empty() {
            return Err(CliError::Config("no [job.<name>] tables".into()));
        }
        let mut outputs = BTreeSet::new();
        for (name, job) in &mut cfg.job {
            let bad = |msg: String| CliError::Config(format!("job `{name}`: {msg}"));
            let kind: PresetKind = job.preset.parse().map_err(|e| bad(format!("{e}")))?;
            make_preset(&ProcessPreset {
                kind,
                params: job.params.clone(),
            })
            .map_err(|e| bad(format!("{e}")))?;
            let family: FamilyKind = job.family.parse().map_err(|e| bad(format!("{e}")))?;
            let p = &job.family_params;
            TestFamily::new(family, p.center, p.width, p.frequency).map_err(|e| bad(format!("family_params: {e}")))?;
            let ladder = job.ladder.clone().unwrap_or_else(|| vec![job.grid.n]);
            if ladder.is_empty() {
                return Err(bad("ladder is empty".into()));
            }
            for n in std::iter::once(job.grid.n).chain(ladder) {
                Grid::new(job.grid.center, job.grid.half_width, n).map_err(|e| bad(format!("grid: {e}")))?;
            }
            if let Some(tol) = job.tolerance {
                if !(tol >= 0.0 && tol.is_finite()) {
                    return Err(bad(format!("tolerance = {tol} must be finite and >= 0")));
                }
            }
            if let Some(t) = job.t {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(bad(format!("t = {t} must be positive")));
                }
            }
            if job.count == Some(0) || job.points == Some(0) {
                return Err(bad("count and points must be positive".into()));
            }
            if job.kind == JobKind::McSemigroup && !kind.simulable() {
                return Err(bad(format!("preset {kind} has no exact sampler")));
            }
            job.resolved_output = base.join(&job.output);
            if !outputs.insert(job.resolved_output.clone()) {
                return Err(bad(format!("output {} is used by another job", job.output.display())));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }
}
