use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{CVector, C64};
use crate::par::Execution;

/// Default clamp subtracted before taking ceilings of partial sums.
pub const DEFAULT_CEIL_CLAMP: f64 = 1e-9;

/// Where condition (ii) of the stopping rule counts unitaries at the estimate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionTwoAt {
    /// At step `Ñ − s`.
    #[default]
    Lagged,
    /// At step `Ñ`.
    Final,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    /// `M`, number of Haar unitaries.
    pub ensemble_size: usize,
    /// `β`, fraction of the ensemble that must sit at the estimate.
    pub beta: f64,
    /// `s`, length of the stability window.
    pub window: usize,
    /// `N_max`, step cap.
    pub max_steps: usize,
    /// Dimension of the sampled unitaries.
    pub dimension: usize,
    pub master_seed: u64,
    pub ceil_clamp: f64,
    /// Start vector; `None` means `e_1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<C64>>,
    #[serde(default)]
    pub condition_two_at: ConditionTwoAt,
    #[serde(default)]
    pub execution: Execution,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            ensemble_size: 100,
            beta: 0.5,
            window: 1,
            max_steps: 100_000,
            dimension: 2,
            master_seed: 0,
            ceil_clamp: DEFAULT_CEIL_CLAMP,
            start: None,
            condition_two_at: ConditionTwoAt::Lagged,
            execution: Execution::default(),
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ensemble_size == 0 {
            return Err(Error::InvalidInput("ensemble size M must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidInput(format!("beta must lie in [0, 1], got {}", self.beta)));
        }
        if self.window == 0 {
            return Err(Error::InvalidInput("window s must be at least 1".into()));
        }
        if self.max_steps < self.window + 1 {
            return Err(Error::InvalidInput(format!(
                "max_steps must be at least s + 1 = {}, got {}",
                self.window + 1,
                self.max_steps
            )));
        }
        if self.dimension == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if !(self.ceil_clamp >= 0.0 && self.ceil_clamp < 1.0) {
            return Err(Error::InvalidInput(format!("ceil clamp must lie in [0, 1), got {}", self.ceil_clamp)));
        }
        if let Some(start) = &self.start {
            if start.len() != self.dimension {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension,
                    actual: start.len(),
                });
            }
        }
        Ok(())
    }

    /// The start vector `z`.
    pub fn start_vector(&self) -> Result<CVector> {
        match &self.start {
            None => CVector::basis(self.dimension, 0),
            Some(v) => CVector::from_slice(v),
        }
    }
}
