use serde::{Deserialize, Serialize};

use super::config::{ConditionTwoAt, EstimatorConfig};
use crate::error::{Error, Result};
use crate::numerics::{haar_unitary, CVector, SeedStream, UnitaryMatrix};
use crate::par::{for_each_mut, map_indexed};
use crate::witness::{iterate_fixed, PowerTerms};

/// Steps each history advances between two scans of the stopping rule.
const BLOCK: usize = 64;

/// `⌈S_N(U) − ε⌉`, the lower bound on the dimension after `N` terms.
pub fn d_lower(u: &UnitaryMatrix, z: &CVector, n: usize, ceil_clamp: f64) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    Ok(ceil_bound(iterate_fixed(u, z, n)?.sum(), ceil_clamp))
}

fn ceil_bound(sum: f64, clamp: f64) -> usize {
    (sum - clamp).ceil().max(0.0) as usize
}

/// Running partial sum `S_N` of one unitary and its ceilings.
#[derive(Debug, Clone)]
pub struct LowerBoundTracker {
    terms: PowerTerms,
    sum: f64,
    steps: usize,
    clamp: f64,
}

impl LowerBoundTracker {
    pub fn new(u: &UnitaryMatrix, z: &CVector, ceil_clamp: f64) -> Result<Self> {
        Ok(LowerBoundTracker {
            terms: PowerTerms::new(u, z)?,
            sum: 0.0,
            steps: 0,
            clamp: ceil_clamp,
        })
    }

    /// Adds the next term and returns `d_N` for the new `N`.
    pub fn advance(&mut self) -> usize {
        self.sum += self.terms.next().expect("power terms never end");
        self.steps += 1;
        self.current()
    }

    /// `d_N` at the current `N` (0 before the first step).
    pub fn current(&self) -> usize {
        if self.steps == 0 {
            0
        } else {
            ceil_bound(self.sum, self.clamp)
        }
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn partial_sum(&self) -> f64 {
        self.sum
    }
}

/// First `N ≤ n_max` with `d_N(U) ≥ target`.
pub fn steps_to_reach(
    u: &UnitaryMatrix,
    z: &CVector,
    target: usize,
    n_max: usize,
    ceil_clamp: f64,
) -> Result<Option<usize>> {
    let mut t = LowerBoundTracker::new(u, z, ceil_clamp)?;
    for _ in 0..n_max {
        if t.advance() >= target {
            return Ok(Some(t.steps()));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    CriterionMet,
    StepCap,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StopReason::CriterionMet => "criterion-met",
            StopReason::StepCap => "step-cap",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub d_tilde: usize,
    pub n_tilde: usize,
    pub stopped_by: StopReason,
    /// `histories[i][N − 1] = d_N(U_i)` for `N = 1..=Ñ`.
    pub histories: Vec<Vec<usize>>,
}

impl EstimatorResult {
    /// `d_Ñ(U_i)` for every unitary.
    pub fn final_lower_bounds(&self) -> Vec<usize> {
        self.histories.iter().map(|h| h.last().copied().unwrap_or(0)).collect()
    }
}

/// The `M` Haar unitaries of a run; unitary `i` uses `SeedStream(master_seed, i)`.
pub fn haar_ensemble(config: &EstimatorConfig) -> Result<Vec<UnitaryMatrix>> {
    config.validate()?;
    let d = config.dimension;
    map_indexed(config.execution, config.ensemble_size, |i| {
        haar_unitary(d, &SeedStream::new(config.master_seed, i as u64))
    })
    .into_iter()
    .collect()
}

/// Draws the ensemble and runs the stopping rule on it.
pub fn run_estimator(config: &EstimatorConfig) -> Result<EstimatorResult> {
    let unitaries = haar_ensemble(config)?;
    run_estimator_on(&unitaries, &config.start_vector()?, config)
}

/// The stopping rule on a given ensemble. `config.dimension` and `master_seed` are ignored.
///
/// Stops at the first `Ñ ≥ s + 1` with `d̃ = max_i d_Ñ(U_i)` such that
/// (i) `max_i d_N(U_i) = d̃` for every `N` in `Ñ−s..=Ñ`, and
/// (ii) at least `βM` unitaries have `d_{Ñ−s}(U_i) = d̃` (or `d_Ñ`, see [`ConditionTwoAt`]).
pub fn run_estimator_on(
    unitaries: &[UnitaryMatrix],
    z: &CVector,
    config: &EstimatorConfig,
) -> Result<EstimatorResult> {
    let checked = EstimatorConfig {
        ensemble_size: unitaries.len(),
        dimension: z.dim(),
        ..config.clone()
    };
    checked.validate()?;
    let m = unitaries.len();
    let s = config.window;
    let mut trackers = unitaries
        .iter()
        .map(|u| LowerBoundTracker::new(u, z, config.ceil_clamp))
        .collect::<Result<Vec<_>>>()?;
    let mut histories: Vec<Vec<usize>> = vec![Vec::new(); m];
    // maxima[N − 1] = max_i d_N(U_i)
    let mut maxima: Vec<usize> = Vec::new();
    let needed = config.beta * m as f64;

    let mut done = 0;
    while done < config.max_steps {
        let block = BLOCK.min(config.max_steps - done);
        let mut pairs: Vec<_> = trackers.iter_mut().zip(histories.iter_mut()).collect();
        for_each_mut(config.execution, &mut pairs, |(t, h)| {
            for _ in 0..block {
                h.push(t.advance());
            }
        });
        for n in done + 1..=done + block {
            maxima.push(histories.iter().map(|h| h[n - 1]).max().unwrap_or(0));
            if n < s + 1 {
                continue;
            }
            let d_tilde = maxima[n - 1];
            let stable = maxima[n - 1 - s..n].iter().all(|&x| x == d_tilde);
            if !stable {
                continue;
            }
            let at = match config.condition_two_at {
                ConditionTwoAt::Lagged => n - s,
                ConditionTwoAt::Final => n,
            };
            let count = histories.iter().filter(|h| h[at - 1] == d_tilde).count();
            if count as f64 >= needed {
                for h in &mut histories {
                    h.truncate(n);
                }
                return Ok(EstimatorResult {
                    d_tilde,
                    n_tilde: n,
                    stopped_by: StopReason::CriterionMet,
                    histories,
                });
            }
        }
        done += block;
    }
    Ok(EstimatorResult {
        d_tilde: maxima.last().copied().unwrap_or(0),
        n_tilde: config.max_steps,
        stopped_by: StopReason::StepCap,
        histories,
    })
}
