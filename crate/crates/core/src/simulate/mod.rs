//! The sequential yes-no measurement process: exact outcome-string probabilities,
//! sampled trajectories and return times.

mod markov;
mod process;
mod sampling;

pub use markov::{
    fitted_transition, markov_string_probability, qubit_transition_matrix, Transition, STOCHASTIC_TOL,
};
pub use process::{qubit_mean_return_time, MeanReturnTime, MeasurementProcess, Outcome, OutcomeString};
pub use sampling::{
    monte_carlo_return_time, sample_outcomes, trajectory_rows, ReturnTimeStats, Sampler, TrajectoryRow,
    BRANCH_NOISE_FLOOR,
};
