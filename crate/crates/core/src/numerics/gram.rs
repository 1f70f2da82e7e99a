use nalgebra::DVector;

use super::types::{CVector, C64};

/// Relative numerical-rank tolerance; scaled by the largest input norm.
pub const RANK_TOL_FACTOR: f64 = 1e-9;

/// `1e-9 · max ‖v‖` over the inputs.
pub fn default_rank_tol(vectors: &[DVector<C64>]) -> f64 {
    let largest = vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
    RANK_TOL_FACTOR * largest
}

/// Orthonormal basis of the span of `vectors`, in input order.
///
/// Each vector is orthogonalized twice against the basis built so far; it is
/// dropped when the remaining component has norm `<= tol`.
pub fn orthonormal_basis_of_span(vectors: &[CVector], tol: f64) -> Vec<CVector> {
    let raw: Vec<DVector<C64>> = vectors.iter().map(|v| (**v).clone()).collect();
    orthonormalize(&raw, tol)
        .into_iter()
        .map(|v| CVector::new(v).expect("Gram-Schmidt output is finite and nonempty"))
        .collect()
}

pub(crate) fn orthonormalize(vectors: &[DVector<C64>], tol: f64) -> Vec<DVector<C64>> {
    extend_orthonormal(&[], vectors, tol)
}

/// Extends an existing orthonormal family with the components of `vectors` orthogonal to it.
/// Returns only the new vectors.
pub(crate) fn extend_orthonormal(
    existing: &[DVector<C64>],
    vectors: &[DVector<C64>],
    tol: f64,
) -> Vec<DVector<C64>> {
    let mut basis: Vec<DVector<C64>> = existing.to_vec();
    let start = basis.len();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let coeff = b.dotc(&w);
                w.axpy(-coeff, b, C64::new(1.0, 0.0));
            }
        }
        let n = w.norm();
        if n > tol {
            basis.push(w.unscale(n));
        }
    }
    basis.split_off(start)
}

/// Norm of the orthogonal projection of `z` onto the span of an orthonormal family.
pub(crate) fn projection_norm(basis: &[DVector<C64>], z: &DVector<C64>) -> f64 {
    basis.iter().map(|b| b.dotc(z).norm_sqr()).sum::<f64>().sqrt()
}

/// Orthogonal projection of `z` onto the span of an orthonormal family.
pub(crate) fn project(basis: &[DVector<C64>], z: &DVector<C64>) -> DVector<C64> {
    let mut out = DVector::zeros(z.len());
    for b in basis {
        out.axpy(b.dotc(z), b, C64::new(1.0, 0.0));
    }
    out
}
