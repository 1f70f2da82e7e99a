use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::exact::{analyze, Tolerances};
use super::projector::Projector;
use crate::error::{Error, Result};
use crate::numerics::{CVector, UnitaryMatrix, C64};

/// Radii at or above this are treated as "no geometric decay available".
pub const RADIUS_CEILING: f64 = 1.0 - 1e-12;

/// The terms `‖(PU)^n z‖²`, `n = 0, 1, 2, …` (an infinite iterator).
#[derive(Debug, Clone)]
pub struct PowerTerms {
    u: DMatrix<C64>,
    projector: Projector,
    state: DVector<C64>,
    buffer: DVector<C64>,
    n: usize,
}

impl PowerTerms {
    pub fn new(u: &UnitaryMatrix, z: &CVector) -> Result<Self> {
        check_dims(u, z)?;
        let projector = Projector::new(z)?;
        let state = projector.z().clone();
        let d = u.dim();
        Ok(PowerTerms {
            u: u.matrix().clone(),
            projector,
            state,
            buffer: DVector::zeros(d),
            n: 0,
        })
    }

    /// The iterate `(PU)^n z` whose squared norm is the next item.
    pub fn state(&self) -> &DVector<C64> {
        &self.state
    }

    /// Index `n` of the next item.
    pub fn index(&self) -> usize {
        self.n
    }
}

impl Iterator for PowerTerms {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let term = if self.n == 0 { 1.0 } else { self.state.norm_squared() };
        self.buffer.gemv(C64::new(1.0, 0.0), &self.u, &self.state, C64::new(0.0, 0.0));
        std::mem::swap(&mut self.state, &mut self.buffer);
        self.projector.apply_in_place(&mut self.state);
        self.n += 1;
        Some(term)
    }
}

pub(crate) fn check_dims(u: &UnitaryMatrix, z: &CVector) -> Result<()> {
    if u.dim() != z.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            actual: z.dim(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TruncationReason {
    TailBoundMet,
    MaxSteps,
}

impl std::fmt::Display for TruncationReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TruncationReason::TailBoundMet => "tail-bound-met",
            TruncationReason::MaxSteps => "max-steps",
        })
    }
}

/// A truncated evaluation of `Σ ‖(PU)^n z‖²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterateSeries {
    /// `a_n = ‖(PU)^n z‖²` for `n = 0..N`, with `a_0 = 1`.
    pub norms_sq: Vec<f64>,
    /// `partial_sums[n] = Σ_{k ≤ n} a_k`, i.e. `S_{n+1}`.
    pub partial_sums: Vec<f64>,
    pub truncation_reason: TruncationReason,
    /// Spectral radius of `PU` on `W^⊥ ∩ Θ`, when it was computed.
    pub contraction_radius: Option<f64>,
    /// Tail estimate `max(r^{2N}, a_N) / (1 − r²)` at the stopping step (tail-bound runs only).
    pub tail_estimate: Option<f64>,
}

impl IterateSeries {
    /// `S_N`, the sum of all recorded terms.
    pub fn sum(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.norms_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms_sq.is_empty()
    }

    fn push(&mut self, term: f64) {
        let prev = self.sum();
        self.norms_sq.push(term);
        self.partial_sums.push(prev + term);
    }
}

/// Exactly `steps` terms of the series, no tail analysis.
pub fn iterate_fixed(u: &UnitaryMatrix, z: &CVector, steps: usize) -> Result<IterateSeries> {
    let mut series = IterateSeries {
        norms_sq: Vec::with_capacity(steps),
        partial_sums: Vec::with_capacity(steps),
        truncation_reason: TruncationReason::MaxSteps,
        contraction_radius: None,
        tail_estimate: None,
    };
    for term in PowerTerms::new(u, z)?.take(steps) {
        series.push(term);
    }
    Ok(series)
}

/// Sums the series until the geometric tail estimate drops below `tail_tol`.
///
/// With `r` the contraction radius, the run stops at the first `N ≥ 1` where both
/// `r^{2N}/(1−r²)` and `a_N/(1−r²)` are below `tail_tol`; the kept terms are `a_0..a_{N−1}`.
/// When `r` is (numerically) 1 or the bound is not reached within `max_steps` terms the
/// result is flagged [`TruncationReason::MaxSteps`].
pub fn iterate_norms(
    u: &UnitaryMatrix,
    z: &CVector,
    tail_tol: f64,
    max_steps: usize,
) -> Result<IterateSeries> {
    iterate_norms_with(u, z, tail_tol, max_steps, &Tolerances::default())
}

pub fn iterate_norms_with(
    u: &UnitaryMatrix,
    z: &CVector,
    tail_tol: f64,
    max_steps: usize,
    tol: &Tolerances,
) -> Result<IterateSeries> {
    let (terms, rho) = prepare(u, z, tail_tol, max_steps, tol)?;
    let mut series = IterateSeries {
        norms_sq: Vec::new(),
        partial_sums: Vec::new(),
        truncation_reason: TruncationReason::MaxSteps,
        contraction_radius: Some(rho),
        tail_estimate: None,
    };
    let (reason, estimate) = drive(terms, rho, tail_tol, max_steps, |t| series.push(t));
    series.truncation_reason = reason;
    series.tail_estimate = estimate;
    Ok(series)
}

/// The stopping rule of [`iterate_norms`] without keeping the individual terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSum {
    /// `S_N`.
    pub sum: f64,
    /// `N`, the number of terms kept.
    pub terms: usize,
    /// `a_{N−1}`.
    pub last_term: f64,
    pub truncation_reason: TruncationReason,
    pub contraction_radius: f64,
    pub tail_estimate: Option<f64>,
}

/// Same truncation as [`iterate_norms`] in constant memory, for long runs.
pub fn sum_series(u: &UnitaryMatrix, z: &CVector, tail_tol: f64, max_steps: usize) -> Result<SeriesSum> {
    sum_series_with(u, z, tail_tol, max_steps, &Tolerances::default())
}

pub fn sum_series_with(
    u: &UnitaryMatrix,
    z: &CVector,
    tail_tol: f64,
    max_steps: usize,
    tol: &Tolerances,
) -> Result<SeriesSum> {
    let (terms, rho) = prepare(u, z, tail_tol, max_steps, tol)?;
    let mut sum = 0.0;
    let mut count = 0;
    let mut last_term = 0.0;
    let (reason, estimate) = drive(terms, rho, tail_tol, max_steps, |t| {
        sum += t;
        count += 1;
        last_term = t;
    });
    Ok(SeriesSum {
        sum,
        terms: count,
        last_term,
        truncation_reason: reason,
        contraction_radius: rho,
        tail_estimate: estimate,
    })
}

fn prepare(
    u: &UnitaryMatrix,
    z: &CVector,
    tail_tol: f64,
    max_steps: usize,
    tol: &Tolerances,
) -> Result<(PowerTerms, f64)> {
    if !(tail_tol > 0.0) {
        return Err(Error::InvalidInput(format!("tail tolerance must be positive, got {tail_tol}")));
    }
    if max_steps == 0 {
        return Err(Error::InvalidInput("max_steps must be at least 1".into()));
    }
    let rho = analyze(u, z, tol)?.contraction_radius;
    Ok((PowerTerms::new(u, z)?, rho))
}

/// Feeds kept terms to `keep` until the tail estimate drops below `tail_tol` or `max_steps`
/// terms were kept.
fn drive(
    terms: PowerTerms,
    rho: f64,
    tail_tol: f64,
    max_steps: usize,
    mut keep: impl FnMut(f64),
) -> (TruncationReason, Option<f64>) {
    let decays = rho < RADIUS_CEILING;
    let denom = 1.0 - rho * rho;
    let mut geometric = 1.0;
    for (n, term) in terms.enumerate() {
        if n >= 1 && decays {
            geometric *= rho * rho;
            let estimate = geometric.max(term) / denom;
            if estimate < tail_tol {
                return (TruncationReason::TailBoundMet, Some(estimate));
            }
        }
        if n == max_steps {
            break;
        }
        keep(term);
    }
    (TruncationReason::MaxSteps, None)
}

/// `α_n = tr((PU)^n (PU)^{*n})`.
pub fn alpha_trace(u: &UnitaryMatrix, z: &CVector, n: usize) -> Result<f64> {
    check_dims(u, z)?;
    let pu = Projector::new(z)?.matrix() * u.matrix();
    let d = u.dim();
    let mut power = DMatrix::<C64>::identity(d, d);
    for _ in 0..n {
        power = &pu * power;
    }
    Ok(power.norm_squared())
}
