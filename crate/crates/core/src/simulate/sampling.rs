use nalgebra::DVector;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::process::{MeasurementProcess, Outcome, OutcomeString};
use crate::error::{Error, Result};
use crate::numerics::{SeedStream, C64};

/// States with `‖PUψ‖` below this cannot be continued after outcome 1.
pub const BRANCH_NOISE_FLOOR: f64 = 1e-14;

/// Sequential sampler under the Lüders rule: keeps the normalized post-measurement state.
#[derive(Debug, Clone)]
pub struct Sampler<'a, R> {
    process: &'a MeasurementProcess,
    rng: R,
    psi: DVector<C64>,
    step: usize,
}

impl<'a, R: Rng> Sampler<'a, R> {
    pub fn new(process: &'a MeasurementProcess, rng: R) -> Self {
        Sampler {
            process,
            rng,
            psi: (**process.z()).clone(),
            step: 0,
        }
    }

    /// Draws one outcome. Outcome 0 resets the state to `z` exactly.
    pub fn next_outcome(&mut self) -> Result<Outcome> {
        self.step += 1;
        let z = self.process.z();
        let evolved = self.process.unitary().matrix() * &self.psi;
        let overlap = z.dotc(&evolved);
        let q = overlap.norm_sqr();
        let draw: f64 = self.rng.random();
        if draw < q {
            self.psi.copy_from(z);
            return Ok(Outcome::Zero);
        }
        let mut rest = evolved;
        rest.axpy(-overlap, z, C64::new(1.0, 0.0));
        let norm = rest.norm();
        if norm < BRANCH_NOISE_FLOOR {
            return Err(Error::ImpossibleBranch {
                step: self.step,
                norm,
            });
        }
        self.psi = rest.unscale(norm);
        Ok(Outcome::One)
    }

    /// Number of outcomes drawn so far.
    pub fn steps(&self) -> usize {
        self.step
    }
}

/// An outcome string of the given length from a fresh trajectory.
pub fn sample_outcomes(
    process: &MeasurementProcess,
    length: usize,
    stream: &SeedStream,
) -> Result<OutcomeString> {
    if length == 0 {
        return Err(Error::InvalidInput("length must be at least 1".into()));
    }
    let mut sampler = Sampler::new(process, stream.rng());
    let mut out = OutcomeString::new(Vec::with_capacity(length));
    for _ in 0..length {
        out.push(sampler.next_outcome()?);
    }
    Ok(out)
}

/// One row of a trajectory dump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub step: usize,
    pub outcome: u8,
    /// The state was reset to `z` after this step.
    pub renewal_flag: u8,
}

/// Rows `step,outcome,renewal_flag` for an outcome string (steps numbered from 1).
pub fn trajectory_rows(outcomes: &OutcomeString) -> Vec<TrajectoryRow> {
    outcomes
        .symbols()
        .iter()
        .enumerate()
        .map(|(i, &o)| TrajectoryRow {
            step: i + 1,
            outcome: o.index() as u8,
            renewal_flag: u8::from(o == Outcome::Zero),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnTimeStats {
    /// Gaps `T_k` between consecutive zeros (`T_1` is the position of the first zero).
    pub samples: Vec<u64>,
    pub count: usize,
    pub mean: f64,
    pub std_err: f64,
    /// False when the step cap was hit before the requested number of returns.
    pub complete: bool,
    pub steps: u64,
}

impl ReturnTimeStats {
    pub fn from_samples(samples: Vec<u64>, complete: bool, steps: u64) -> Self {
        let count = samples.len();
        let (mean, std_err) = if count == 0 {
            (f64::NAN, f64::NAN)
        } else {
            let n = count as f64;
            let mean = samples.iter().map(|&t| t as f64).sum::<f64>() / n;
            let var = if count > 1 {
                samples.iter().map(|&t| (t as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            (mean, (var / n).sqrt())
        };
        ReturnTimeStats {
            samples,
            count,
            mean,
            std_err,
            complete,
            steps,
        }
    }
}

/// Samples until `returns` zeros were observed or `step_cap` outcomes were drawn.
pub fn monte_carlo_return_time(
    process: &MeasurementProcess,
    returns: usize,
    stream: &SeedStream,
    step_cap: u64,
) -> Result<ReturnTimeStats> {
    if returns == 0 {
        return Err(Error::InvalidInput("target number of returns must be at least 1".into()));
    }
    let mut sampler = Sampler::new(process, stream.rng());
    let mut samples = Vec::with_capacity(returns);
    let mut since_last = 0u64;
    let mut steps = 0u64;
    while samples.len() < returns {
        if steps == step_cap {
            return Ok(ReturnTimeStats::from_samples(samples, false, steps));
        }
        steps += 1;
        since_last += 1;
        if sampler.next_outcome()? == Outcome::Zero {
            samples.push(since_last);
            since_last = 0;
        }
    }
    Ok(ReturnTimeStats::from_samples(samples, true, steps))
}
