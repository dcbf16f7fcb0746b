//! Executable checks of the generator representations and of the Levy axioms.

mod forms;
mod monte_carlo;
mod report;
mod sampling;
pub mod statistics;
mod theorems;

pub use forms::{compare_forms, FormsComparison, ThreeForms, FORMS_TOLERANCE};
pub use monte_carlo::{
    check_independence, check_stationarity, mc_semigroup_check, McOptions, BIAS_FACTOR, DEFAULT_MC_TIME,
    KS_COEFFICIENT_01, PATH_STEPS,
};
pub use report::{Status, VerificationReport};
pub use sampling::{simulate_increment, tags, IncrementSampler, CHUNK};
pub use theorems::{
    check_limit_theorems, check_monotonicity, log_spaced, MonotonicityOptions, TailKernelSource, DEFAULT_LADDER_DEPTH,
    LADDER_DECAY,
};
