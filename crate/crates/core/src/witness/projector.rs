use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numerics::{CVector, C64};

/// Accepted deviation of `‖z‖` from 1 before renormalization.
pub const UNIT_NORM_TOL: f64 = 1e-8;

/// The projection `P = I − zz*` onto `Θ = span{z}^⊥`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    z: DVector<C64>,
    matrix: DMatrix<C64>,
}

impl Projector {
    pub fn new(z: &CVector) -> Result<Self> {
        let z = unit_vector(z)?;
        let d = z.len();
        let matrix = DMatrix::identity(d, d) - &z * z.adjoint();
        Ok(Projector { z, matrix })
    }

    /// The unit vector `z` (renormalized).
    pub fn z(&self) -> &DVector<C64> {
        &self.z
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    /// `v − z⟨z, v⟩`.
    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        let mut out = v.clone();
        self.apply_in_place(&mut out);
        out
    }

    pub fn apply_in_place(&self, v: &mut DVector<C64>) {
        let c = self.z.dotc(v);
        v.axpy(-c, &self.z, C64::new(1.0, 0.0));
    }
}

/// Validates `‖z‖ ≈ 1` and returns `z / ‖z‖`.
pub(crate) fn unit_vector(z: &CVector) -> Result<DVector<C64>> {
    let n = z.norm();
    if n == 0.0 {
        return Err(Error::InvalidVector("zero vector".into()));
    }
    if !n.is_finite() {
        return Err(Error::InvalidVector("non-finite norm".into()));
    }
    if (n - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::InvalidVector(format!("expected a unit vector, |z| = {n}")));
    }
    Ok(z.unscale(n))
}
