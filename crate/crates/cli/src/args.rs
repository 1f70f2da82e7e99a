use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "dimwitness", version, about = "Return-time series, measurement simulation and dimension estimation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact value of the series and the per-eigenspace intersection counts (JSON).
    ExactSum(ExactSumArgs),
    /// Terms and partial sums of the series (CSV).
    Iterate(IterateArgs),
    /// Sample an outcome string; optionally dump the trajectory as CSV.
    Sample(SampleArgs),
    /// Monte Carlo return times to the start vector (JSON).
    ReturnTime(ReturnTimeArgs),
    /// Run the ensemble dimension estimator (JSON).
    Estimate(EstimateArgs),
    /// Repeat the estimator over a range of dimensions (CSV).
    Sweep(SweepArgs),
    /// Write a Haar-random unitary or orthogonal matrix file (JSON).
    Haar(HaarArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OperatorArgs {
    /// Matrix file (`kind` unitary or orthogonal).
    pub matrix: PathBuf,
    /// Start vector file; defaults to e1.
    #[arg(long = "z", value_name = "VECTOR_FILE")]
    pub vector: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ToleranceArgs {
    /// Eigenvalue clustering threshold (default 1e-8 * d).
    #[arg(long)]
    pub cluster_tol: Option<f64>,
    /// Threshold below which z counts as orthogonal to an eigenspace.
    #[arg(long, default_value_t = 1e-8)]
    pub theta_tol: f64,
    /// Gram-Schmidt drop threshold.
    #[arg(long, default_value_t = 1e-9)]
    pub rank_tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExactSumArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    /// Use the real invariant-plane decomposition (orthogonal input, real z).
    #[arg(long)]
    pub real: bool,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IterateArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    /// Emit exactly this many terms.
    #[arg(long, conflicts_with = "tail_tol")]
    pub steps: Option<usize>,
    /// Stop once the geometric tail estimate is below this (default 1e-8).
    #[arg(long)]
    pub tail_tol: Option<f64>,
    /// Term cap for tail-tolerance runs.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_steps: usize,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub manifest: ManifestArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeedArgs {
    /// Master seed.
    #[arg(long, env = "WITNESS_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ManifestArgs {
    /// Write the run manifest here instead of stderr.
    #[arg(long, value_name = "PATH")]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    #[arg(long)]
    pub length: usize,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Write `step,outcome,renewal_flag` rows here.
    #[arg(long, value_name = "PATH")]
    pub trajectory: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub manifest: ManifestArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReturnTimeArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    /// Number of returns to observe.
    #[arg(long)]
    pub returns: usize,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Give up after this many measurements.
    #[arg(long, default_value_t = 1_000_000_000)]
    pub step_cap: u64,
    /// Include every sampled return time in the output.
    #[arg(long)]
    pub samples: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionTwo {
    Lagged,
    Final,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnsembleArgs {
    /// Ensemble size.
    #[arg(long = "M", default_value_t = 100)]
    pub m: usize,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// Stability window.
    #[arg(long = "s", default_value_t = 1)]
    pub s: usize,
    /// Step cap.
    #[arg(long, default_value_t = 100_000)]
    pub max_steps: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub ceil_clamp: f64,
    /// Step at which the ensemble fraction is counted.
    #[arg(long, value_enum, default_value_t = ConditionTwo::Lagged)]
    pub condition_two_at: ConditionTwo,
    /// Run on a single thread.
    #[arg(long)]
    pub sequential: bool,
    #[command(flatten)]
    pub seed: SeedArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EstimateArgs {
    /// Dimension of the sampled unitaries.
    #[arg(long)]
    pub d: usize,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Start vector file; defaults to e1.
    #[arg(long = "z", value_name = "VECTOR_FILE")]
    pub vector: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub d_min: usize,
    #[arg(long)]
    pub d_max: usize,
    #[arg(long)]
    pub reps: usize,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Also write per-dimension means as CSV here.
    #[arg(long, value_name = "PATH")]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub manifest: ManifestArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HaarArgs {
    #[arg(long)]
    pub d: usize,
    /// Draw a real orthogonal matrix.
    #[arg(long)]
    pub real: bool,
    #[command(flatten)]
    pub seed: SeedArgs,
}
