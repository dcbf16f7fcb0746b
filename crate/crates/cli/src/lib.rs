//! Batch front-end: reads a TOML run configuration, executes its jobs and
//! writes one JSON report and one CSV table per job.

pub mod config;
pub mod error;
pub mod jobs;

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use levygen_core::PresetKind;
use rayon::prelude::*;
use serde_json::json;

pub use config::{Job, JobKind, RunConfig};
pub use error::CliError;
pub use jobs::{run_job, JobOutput, JobStatus};

/// Environment variable selecting the number of concurrent workers.
pub const WORKERS_ENV: &str = "LEVYGEN_WORKERS";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Outcome of a run: per-job results in configuration order and written files.
#[derive(Debug)]
pub struct RunSummary {
    pub jobs: Vec<JobOutput>,
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        if self.jobs.iter().any(|j| j.status.is_failure()) {
            EXIT_FAIL
        } else {
            EXIT_PASS
        }
    }
}

/// Worker count from [`WORKERS_ENV`]; unset means sequential.
pub fn workers_from_env() -> Result<usize, CliError> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Config(format!(
                "{WORKERS_ENV} = {v:?} is not a positive integer"
            ))),
        },
    }
}

/// Runs every job of the configuration at `path`. Errors are configuration or
/// output errors; failing jobs are reported in the summary.
pub fn run(path: &Path, workers: usize) -> Result<RunSummary, CliError> {
    let cfg = RunConfig::load(path)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    let entries: Vec<(&String, &Job)> = cfg.job.iter().collect();
    let outputs: Vec<JobOutput> = pool.install(|| entries.par_iter().map(|(name, job)| run_job(name, job)).collect());
    let now = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut files = Vec::new();
    for ((_, job), out) in entries.iter().zip(&outputs) {
        let json_path = with_suffix(&job.resolved_output, "json");
        let csv_path = with_suffix(&job.resolved_output, "csv");
        write_atomic(&json_path, &out.json(job, now)?)?;
        write_atomic(&csv_path, &out.csv())?;
        files.push(json_path);
        files.push(csv_path);
    }
    Ok(RunSummary { jobs: outputs, files })
}

fn with_suffix(p: &Path, ext: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Writes to a sibling temporary file, then renames over the target.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

/// Preset names, parameter schemas and simulability, as text or JSON.
pub fn list_presets(as_json: bool) -> String {
    if as_json {
        let presets: Vec<_> = PresetKind::ALL
            .iter()
            .map(|k| json!({ "name": k.name(), "simulable": k.simulable(), "params": k.schema() }))
            .collect();
        return serde_json::to_string_pretty(&json!({ "presets": presets })).expect("static schema") + "\n";
    }
    let mut s = String::new();
    for k in PresetKind::ALL {
        s.push_str(&format!(
            "{}{}\n",
            k.name(),
            if k.simulable() { "" } else { " (not simulable)" }
        ));
        for p in k.schema() {
            s.push_str(&format!("  {:<10} default {:<6} {}\n", p.name, p.default, p.bound));
        }
    }
    s
}
