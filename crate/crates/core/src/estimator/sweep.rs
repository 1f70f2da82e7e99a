use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::config::EstimatorConfig;
use super::run::{haar_ensemble, run_estimator_on, steps_to_reach, StopReason};
use crate::error::{Error, Result};
use crate::numerics::derive_seed;
use crate::par::map_indexed;

/// One estimator run of a sweep. Column order is the CSV schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: usize,
    pub rep: usize,
    pub d_tilde: usize,
    #[serde(rename = "N_tilde")]
    pub n_tilde: usize,
    /// 1.0 when `d̃ = d`, else 0.0.
    pub accuracy: f64,
    /// Mean over the ensemble of the first `N` with `d_N(U) = d` (censored at `N_max`).
    pub steps_to_d: f64,
    /// Mean over the ensemble of the first `N` with `d_N(U) ≥ d/2` (censored at `N_max`).
    pub steps_to_half_d: f64,
    pub stopped_by: StopReason,
}

/// Per-dimension aggregate of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub d: usize,
    pub reps: usize,
    pub accuracy: f64,
    pub mean_n_tilde: f64,
    pub mean_steps_to_d: f64,
    pub mean_steps_to_half_d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    /// Sorted by `(d, rep)`.
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn summaries(&self) -> Vec<SweepSummary> {
        let mut out: Vec<SweepSummary> = Vec::new();
        for chunk in self.rows.chunk_by(|a, b| a.d == b.d) {
            let n = chunk.len() as f64;
            let mean = |f: fn(&SweepRow) -> f64| chunk.iter().map(f).sum::<f64>() / n;
            out.push(SweepSummary {
                d: chunk[0].d,
                reps: chunk.len(),
                accuracy: mean(|r| r.accuracy),
                mean_n_tilde: mean(|r| r.n_tilde as f64),
                mean_steps_to_d: mean(|r| r.steps_to_d),
                mean_steps_to_half_d: mean(|r| r.steps_to_half_d),
            });
        }
        out
    }
}

/// Seed of run `rep` at dimension `d`.
pub fn sweep_seed(master_seed: u64, d: usize, rep: usize) -> u64 {
    derive_seed(master_seed, &[d as u64, rep as u64])
}

/// Runs the estimator `reps` times for every `d` in `d_range`; `template` supplies everything but
/// the dimension and seed, and may not carry a custom start vector.
pub fn experiment_sweep(
    d_range: RangeInclusive<usize>,
    reps: usize,
    template: &EstimatorConfig,
) -> Result<SweepTable> {
    if reps == 0 {
        return Err(Error::InvalidInput("reps must be at least 1".into()));
    }
    if d_range.is_empty() || *d_range.start() == 0 {
        return Err(Error::InvalidInput(format!(
            "dimension range {}..={} is empty or contains 0",
            d_range.start(),
            d_range.end()
        )));
    }
    if template.start.is_some() {
        return Err(Error::InvalidInput("sweeps always start from e1".into()));
    }
    let jobs: Vec<(usize, usize)> = d_range.flat_map(|d| (0..reps).map(move |r| (d, r))).collect();
    let rows = map_indexed(template.execution, jobs.len(), |j| {
        let (d, rep) = jobs[j];
        let config = EstimatorConfig {
            dimension: d,
            master_seed: sweep_seed(template.master_seed, d, rep),
            ..template.clone()
        };
        sweep_row(&config, rep)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { rows })
}

fn sweep_row(config: &EstimatorConfig, rep: usize) -> Result<SweepRow> {
    let d = config.dimension;
    let z = config.start_vector()?;
    let unitaries = haar_ensemble(config)?;
    let result = run_estimator_on(&unitaries, &z, config)?;
    let first_steps = |target: usize| -> Result<f64> {
        let total = unitaries
            .iter()
            .map(|u| {
                steps_to_reach(u, &z, target, config.max_steps, config.ceil_clamp)
                    .map(|n| n.unwrap_or(config.max_steps) as f64)
            })
            .sum::<Result<f64>>()?;
        Ok(total / unitaries.len() as f64)
    };
    Ok(SweepRow {
        d,
        rep,
        d_tilde: result.d_tilde,
        n_tilde: result.n_tilde,
        accuracy: if result.d_tilde == d { 1.0 } else { 0.0 },
        steps_to_d: first_steps(d)?,
        steps_to_half_d: first_steps(d.div_ceil(2))?,
        stopped_by: result.stopped_by,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn template(seed: u64) -> EstimatorConfig {
        EstimatorConfig {
            ensemble_size: 20,
            master_seed: seed,
            ..Default::default()
        }
    }

    #[test]
    fn rows_are_sorted_and_complete() {
        let t = experiment_sweep(2..=4, 3, &template(1)).unwrap();
        let keys: Vec<(usize, usize)> = t.rows.iter().map(|r| (r.d, r.rep)).collect();
        let expect: Vec<(usize, usize)> = (2..=4).flat_map(|d| (0..3).map(move |r| (d, r))).collect();
        assert_eq!(keys, expect);
        for r in &t.rows {
            assert!(r.steps_to_half_d <= r.steps_to_d);
            assert!(r.d_tilde <= r.d);
        }
        let s = t.summaries();
        assert_eq!(s.len(), 3);
        assert_eq!(s[1].d, 3);
        assert_eq!(s[1].reps, 3);
    }

    #[test]
    fn single_rep_is_reproducible() {
        let a = experiment_sweep(3..=3, 1, &template(9)).unwrap();
        let b = experiment_sweep(3..=3, 1, &template(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(experiment_sweep(2..=3, 0, &template(0)).is_err());
        assert!(experiment_sweep(0..=3, 1, &template(0)).is_err());
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 5..=3;
        assert!(experiment_sweep(empty, 1, &template(0)).is_err());
    }

    #[test]
    fn seeds_differ_across_cells() {
        assert_ne!(sweep_seed(0, 2, 0), sweep_seed(0, 2, 1));
        assert_ne!(sweep_seed(0, 2, 0), sweep_seed(0, 3, 0));
    }
}
