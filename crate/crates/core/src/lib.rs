//! Exact evaluation of `Σ_n ‖(PU)^n z‖²` for a unitary (or orthogonal) `U` and the
//! projection `P = I − zz*` onto the hyperplane orthogonal to a unit vector `z`,
//! together with the sequential yes-no measurement process whose all-ones string
//! probabilities are the terms of that series, and an ensemble estimator that
//! recovers the Hilbert-space dimension from them.
//!
//! * [`numerics`] — matrix types, Schur/spectral decomposition, Haar sampling, seeded streams.
//! * [`witness`] — projector, iterates of `PU`, exact sums (complex and real), contraction radius.
//! * [`simulate`] — Wigner string probabilities, trajectory sampling, return times.
//! * [`estimator`] — lower bounds `⌈S_N⌉`, the ensemble stopping rule and sweeps.

pub mod error;
pub mod estimator;
pub mod numerics;
pub mod par;
pub mod simulate;
pub mod witness;

pub use error::{Error, Result};
pub use par::Execution;
