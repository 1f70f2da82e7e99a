use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::projector::Projector;
use super::series::check_dims;
use crate::error::Result;
use crate::numerics::{
    default_cluster_tol, eigenvalues, projection_norm, spectral_decomposition,
    CVector, SpectralDecomposition, UnitaryMatrix, C64,
};

/// Numerical thresholds used when counting intersections with `Θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Arc-distance threshold for merging eigenvalues; `None` means `1e-8 · d`.
    pub cluster: Option<f64>,
    /// `z` counts as orthogonal to a subspace when its projection has norm `<=` this.
    pub theta: f64,
    /// Gram-Schmidt drop threshold.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            cluster: None,
            theta: 1e-8,
            rank: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn cluster_for(&self, d: usize) -> f64 {
        self.cluster.unwrap_or_else(|| default_cluster_tol(d))
    }
}

/// `dim V_λ` and `dim(Θ ∩ V_λ)` for one eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenspaceIntersection {
    pub eigenvalue: C64,
    pub dim: usize,
    pub theta_dim: usize,
}

/// An invariant plane of an orthogonal map, rotated by `angle`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneIntersection {
    pub angle: f64,
    /// Whether the plane lies inside `Θ`.
    pub in_theta: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactSumReport {
    pub dimension: usize,
    pub per_eigenspace: Vec<EigenspaceIntersection>,
    /// Only populated for orthogonal inputs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub invariant_planes: Vec<PlaneIntersection>,
    pub dim_w: usize,
    pub exact_sum: usize,
    pub contraction_radius: f64,
}

/// `dim(Θ ∩ V)` for `V` spanned by an orthonormal `basis`: `Θ ∩ V` is the kernel of
/// `v ↦ ⟨z, v⟩` on `V`, so it has codimension 1 unless `z ⟂ V`.
pub fn theta_eigenspace_dim(basis: &[CVector], z: &CVector, tol: f64) -> usize {
    let raw: Vec<DVector<C64>> = basis.iter().map(|b| (**b).clone()).collect();
    theta_dim_raw(&raw, z, tol)
}

pub(crate) fn theta_dim_raw(basis: &[DVector<C64>], z: &DVector<C64>, tol: f64) -> usize {
    if basis.is_empty() {
        return 0;
    }
    if projection_norm(basis, z) > tol {
        basis.len() - 1
    } else {
        basis.len()
    }
}

/// Everything derived from the spectral decomposition of `U` relative to `z`.
#[derive(Debug, Clone)]
pub(crate) struct Analysis {
    pub per_eigenspace: Vec<EigenspaceIntersection>,
    pub dim_w: usize,
    pub contraction_radius: f64,
}

pub(crate) fn analyze(u: &UnitaryMatrix, z: &CVector, tol: &Tolerances) -> Result<Analysis> {
    check_dims(u, z)?;
    let projector = Projector::new(z)?;
    let decomposition = spectral_decomposition(u, tol.cluster_for(u.dim()))?;
    let per_eigenspace: Vec<EigenspaceIntersection> = decomposition
        .clusters()
        .iter()
        .map(|c| EigenspaceIntersection {
            eigenvalue: c.eigenvalue,
            dim: c.dim(),
            theta_dim: theta_dim_raw(&c.basis, projector.z(), tol.theta),
        })
        .collect();
    let dim_w = per_eigenspace.iter().map(|e| e.theta_dim).sum();
    let contraction_radius = radius_from(u, &projector, &decomposition, tol)?;
    Ok(Analysis {
        per_eigenspace,
        dim_w,
        contraction_radius,
    })
}

/// `d − Σ_λ dim(Θ ∩ V_λ)` together with the per-eigenspace counts and the contraction radius.
pub fn exact_sum_complex(u: &UnitaryMatrix, z: &CVector, tol: &Tolerances) -> Result<ExactSumReport> {
    let a = analyze(u, z, tol)?;
    Ok(ExactSumReport {
        dimension: u.dim(),
        per_eigenspace: a.per_eigenspace,
        invariant_planes: Vec::new(),
        dim_w: a.dim_w,
        exact_sum: u.dim() - a.dim_w,
        contraction_radius: a.contraction_radius,
    })
}

/// Spectral radius of `PU` restricted to `W^⊥ ∩ Θ`; 0 when that subspace is trivial.
pub fn contraction_radius(
    u: &UnitaryMatrix,
    z: &CVector,
    decomposition: &SpectralDecomposition,
    tol: &Tolerances,
) -> Result<f64> {
    check_dims(u, z)?;
    radius_from(u, &Projector::new(z)?, decomposition, tol)
}

fn radius_from(
    u: &UnitaryMatrix,
    projector: &Projector,
    decomposition: &SpectralDecomposition,
    tol: &Tolerances,
) -> Result<f64> {
    // W^⊥ is spanned by the non-negligible components P_λ z; these are mutually orthogonal.
    let z = projector.z();
    let components: Vec<(DVector<C64>, f64)> = decomposition
        .clusters()
        .iter()
        .filter_map(|c| {
            let p = crate::numerics::project(&c.basis, z);
            let n = p.norm();
            (n > tol.theta).then(|| (p.unscale(n), n))
        })
        .collect();
    let basis = complement_in_span(&components);
    let pu = projector.matrix() * u.matrix();
    spectral_radius_on(&pu, &basis)
}

/// Orthonormal basis of `{x ∈ span{u_i} : x ⟂ Σ w_i u_i}` for orthonormal `u_i` and weights
/// `w_i > 0`, via the Householder reflector exchanging `w/‖w‖` and `e_1`.
pub(crate) fn complement_in_span(components: &[(DVector<C64>, f64)]) -> Vec<DVector<C64>> {
    let k = components.len();
    if k <= 1 {
        return Vec::new();
    }
    let wnorm = components.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
    let mut v: Vec<f64> = components.iter().map(|(_, w)| w / wnorm).collect();
    v[0] += 1.0;
    let vtv: f64 = v.iter().map(|x| x * x).sum();
    (1..k)
        .map(|j| {
            let d = components[0].0.len();
            let mut b = DVector::zeros(d);
            for (i, (ui, _)) in components.iter().enumerate() {
                let delta = if i == j { 1.0 } else { 0.0 };
                let h = delta - 2.0 * v[i] * v[j] / vtv;
                b.axpy(C64::new(h, 0.0), ui, C64::new(1.0, 0.0));
            }
            b
        })
        .collect()
}

/// Spectral radius of `B* A B` for an orthonormal family `B` spanning an `A`-invariant subspace.
pub(crate) fn spectral_radius_on(a: &DMatrix<C64>, basis: &[DVector<C64>]) -> Result<f64> {
    if basis.is_empty() {
        return Ok(0.0);
    }
    let k = basis.len();
    let b = DMatrix::from_columns(basis);
    let compressed = b.adjoint() * a * &b;
    debug_assert_eq!(compressed.nrows(), k);
    let eig = eigenvalues(&compressed)?;
    Ok(eig.iter().map(|l| l.norm()).fold(0.0, f64::max).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{haar_unitary, SeedStream};
    use crate::witness::series::iterate_fixed;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn e(d: usize, k: usize) -> CVector {
        CVector::basis(d, k).unwrap()
    }

    fn rotation_block(phi: f64) -> UnitaryMatrix {
        let (s, co) = phi.sin_cos();
        UnitaryMatrix::new(DMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])).unwrap()
    }

    #[test]
    fn theta_dims() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(theta_eigenspace_dim(&[e(3, 1), e(3, 2)], &e(3, 0), 1e-8), 2);
        assert_eq!(theta_eigenspace_dim(&[e(3, 0)], &e(3, 0), 1e-8), 0);
        let z = CVector::from_real(&[r, r, 0.0]).unwrap();
        assert_eq!(theta_eigenspace_dim(&[e(3, 0), e(3, 1)], &z, 1e-8), 1);
    }

    #[test]
    fn eigenvector_start_gives_one() {
        let u = UnitaryMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]).unwrap();
        let rep = exact_sum_complex(&u, &e(3, 0), &Tolerances::default()).unwrap();
        assert_eq!(rep.exact_sum, 1);
        assert_eq!(rep.dim_w, 2);
        assert_eq!(rep.contraction_radius, 0.0);
    }

    #[test]
    fn rotation_plus_identity_gives_two() {
        let u = rotation_block(PI / 5.0).direct_sum(&UnitaryMatrix::identity(2).unwrap()).unwrap();
        let rep = exact_sum_complex(&u, &e(4, 0), &Tolerances::default()).unwrap();
        assert_eq!(rep.exact_sum, 2);
        let one = rep
            .per_eigenspace
            .iter()
            .find(|x| (x.eigenvalue - c(1.0, 0.0)).norm() < 1e-9)
            .unwrap();
        assert_eq!((one.dim, one.theta_dim), (2, 2));
        // brute-force partial sums
        let s = iterate_fixed(&u, &e(4, 0), 500).unwrap();
        assert!((s.sum() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn generic_planar_rotation() {
        for phi in [0.3, 0.7, 2.0, 3.0] {
            let rep = exact_sum_complex(&rotation_block(phi), &e(2, 0), &Tolerances::default()).unwrap();
            assert_eq!(rep.exact_sum, 2);
            // consecutive-norm ratio of (PR)^n z is |cos φ|
            assert!((rep.contraction_radius - phi.cos().abs()).abs() < 1e-10, "phi = {phi}");
        }
    }

    #[test]
    fn identity_radius_is_zero() {
        let rep = exact_sum_complex(&UnitaryMatrix::identity(3).unwrap(), &e(3, 0), &Tolerances::default()).unwrap();
        assert_eq!(rep.contraction_radius, 0.0);
        assert_eq!(rep.exact_sum, 1);
    }

    #[test]
    fn haar_radius_bounds_iterates() {
        let u = haar_unitary(3, &SeedStream::new(11, 0)).unwrap();
        let z = e(3, 0);
        let dec = spectral_decomposition(&u, 3e-8).unwrap();
        let rho = contraction_radius(&u, &z, &dec, &Tolerances::default()).unwrap();
        assert!(rho < 1.0);
        let r = (1.0 + rho) / 2.0;
        let norms: Vec<f64> = iterate_fixed(&u, &z, 2000).unwrap().norms_sq.iter().map(|x| x.sqrt()).collect();
        let n0 = (0..1800).find(|&n0| (n0..n0 + 100).all(|n| norms[n] <= r.powi(n as i32))).unwrap();
        assert!(n0 as f64 <= 30.0 / (1.0 - rho));
    }
}
