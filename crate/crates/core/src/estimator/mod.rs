//! Ensemble estimation of the dimension from the lower bounds `d_N(U) = ⌈S_N(U)⌉`.

mod config;
mod run;
mod sweep;

pub use config::{ConditionTwoAt, EstimatorConfig, DEFAULT_CEIL_CLAMP};
pub use run::{
    d_lower, haar_ensemble, run_estimator, run_estimator_on, steps_to_reach, EstimatorResult,
    LowerBoundTracker, StopReason,
};
pub use sweep::{experiment_sweep, sweep_seed, SweepRow, SweepSummary, SweepTable};
