use thiserror::Error;

/// Errors raised by measure construction, kernel assembly and the generator backends.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Levy measure at x = {x}: {reason}")]
    InvalidMeasure { x: f64, reason: String },

    #[error("parameter `{field}` = {value} out of range (requires {bound})")]
    Parameter { field: String, value: f64, bound: String },

    #[error("unknown parameter `{field}` for preset `{preset}`")]
    UnknownParameter { preset: String, field: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown test-function family `{0}`")]
    UnknownFamily(String),

    #[error("{op} is defined only for {domain}, got x = {x}")]
    Domain {
        op: &'static str,
        domain: &'static str,
        x: f64,
    },

    #[error("quadrature for {what} did not converge: achieved {achieved:e}, requested {requested:e}")]
    NumericalFailure {
        what: String,
        achieved: f64,
        requested: f64,
    },

    #[error("kernel cell weight {index} is not finite ({value}); kernel is not locally integrable")]
    KernelIntegrability { index: i64, value: f64 },

    #[error("divergent integral in {what}: {value}")]
    Integrability { what: String, value: f64 },

    #[error("support error: {0}")]
    Support(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("resolution error: {high_frequency_fraction:e} of spectral energy in the top 10% of frequencies")]
    Resolution { high_frequency_fraction: f64 },

    #[error("preset `{0}` has no exact increment sampler")]
    NotSimulable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
