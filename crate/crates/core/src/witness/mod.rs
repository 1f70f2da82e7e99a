//! The series `Σ_n ‖(PU)^n z‖²`: iterates, exact values and decay rate.
//!
//! For a unitary `U` on `ℂ^d` and unit `z`, the series equals
//! `d − Σ_λ dim(Θ ∩ V_λ)` where `Θ = z^⊥` and `V_λ` are the eigenspaces of `U`, and its
//! terms decay geometrically at the rate given by the spectral radius of `PU` on `W^⊥ ∩ Θ`,
//! `W = ⊕_λ (Θ ∩ V_λ)`. For orthogonal `R` on `ℝ^d` the correction splits into the real
//! eigenspaces `W_{±1}` and twice the number of invariant planes contained in `Θ`.

mod exact;
mod projector;
pub mod qubit;
mod real;
mod series;

pub use exact::{
    contraction_radius, exact_sum_complex, theta_eigenspace_dim, EigenspaceIntersection,
    ExactSumReport, PlaneIntersection, Tolerances,
};
pub use projector::{Projector, UNIT_NORM_TOL};
pub use qubit::{havercosin, haversin, qubit_p, qubit_rotation_for, QubitParams};
pub use real::{exact_sum_real, real_invariant_planes, InvariantPlane, RealDecomposition};
pub use series::{
    alpha_trace, iterate_fixed, iterate_norms, iterate_norms_with, sum_series, sum_series_with,
    IterateSeries, PowerTerms, SeriesSum,
    TruncationReason, RADIUS_CEILING,
};
