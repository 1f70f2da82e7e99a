//! The orthogonal case: eigenspaces `W_{±1}` and invariant rotation planes `A_j` of `R`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::exact::{
    complement_in_span, spectral_radius_on, EigenspaceIntersection, ExactSumReport,
    PlaneIntersection, Tolerances,
};
use super::projector::unit_vector;
use crate::error::{Error, Result};
use crate::numerics::{
    arc_distance, extend_orthonormal, orthonormalize, spectral_decomposition, CVector,
    OrthogonalMatrix, C64,
};

/// A two-dimensional `R`-invariant subspace on which `R` rotates by `angle ∈ (0, π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantPlane {
    pub basis: [Vec<f64>; 2],
    pub angle: f64,
    /// `A_j ⊂ Θ`, decided by `‖P_{A_j} z‖ <= tol`.
    pub in_theta: bool,
}

/// Orthogonal decomposition `ℝ^d = W_1 ⊕ W_{−1} ⊕ A_1 ⊕ … ⊕ A_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealDecomposition {
    pub w_plus: Vec<Vec<f64>>,
    pub w_minus: Vec<Vec<f64>>,
    pub planes: Vec<InvariantPlane>,
}

impl RealDecomposition {
    pub fn dim(&self) -> usize {
        self.w_plus.len() + self.w_minus.len() + 2 * self.planes.len()
    }

    /// `|K|`, the number of planes contained in `Θ`.
    pub fn planes_in_theta(&self) -> usize {
        self.planes.iter().filter(|p| p.in_theta).count()
    }
}

fn real_unit(z: &CVector) -> Result<DVector<f64>> {
    if !z.is_real() {
        return Err(Error::InvalidVector("the orthogonal case needs a real vector".into()));
    }
    Ok(unit_vector(z)?.map(|c| c.re))
}

fn to_complex(v: &DVector<f64>) -> DVector<C64> {
    v.map(|x| C64::new(x, 0.0))
}

fn dot(a: &[f64], b: &DVector<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn projection_norm_real(basis: &[Vec<f64>], z: &DVector<f64>) -> f64 {
    basis.iter().map(|b| dot(b, z).powi(2)).sum::<f64>().sqrt()
}

/// Splits a complexified orthogonal map into real eigenspaces and invariant planes.
///
/// Planes of an eigenvalue pair `e^{±iφ}` with multiplicity `m` are built from a basis of
/// `V_{e^{iφ}}` whose first vector is the normalized projection of `z`, so at most one plane
/// per pair meets `z` and the remaining `m − 1` (or all `m`) lie in `Θ`.
pub fn real_invariant_planes(
    r: &OrthogonalMatrix,
    z: &CVector,
    tol: &Tolerances,
) -> Result<RealDecomposition> {
    if r.dim() != z.dim() {
        return Err(Error::DimensionMismatch {
            expected: r.dim(),
            actual: z.dim(),
        });
    }
    let zr = real_unit(z)?;
    let zc = to_complex(&zr);
    let cluster_tol = tol.cluster_for(r.dim());
    let dec = spectral_decomposition(&r.complexify(), cluster_tol)?;

    let mut real_basis: Vec<DVector<C64>> = Vec::new();
    let mut w_plus = Vec::new();
    let mut w_minus = Vec::new();
    let mut planes = Vec::new();
    let mut conjugate_dims = 0usize;

    for cluster in dec.clusters() {
        let arg = cluster.eigenvalue.arg();
        let near_plus = arc_distance(arg, 0.0) <= cluster_tol;
        let near_minus = arc_distance(arg, std::f64::consts::PI) <= cluster_tol;
        if near_plus || near_minus {
            let parts: Vec<DVector<C64>> = cluster
                .basis
                .iter()
                .flat_map(|v| [v.map(|c| C64::new(c.re, 0.0)), v.map(|c| C64::new(c.im, 0.0))])
                .collect();
            let real = extend_orthonormal(&real_basis, &parts, 1e-6);
            if real.len() != cluster.dim() {
                return Err(Error::numeric(
                    "real eigenspace dimension disagrees with its complexification",
                    (real.len() as f64 - cluster.dim() as f64).abs(),
                ));
            }
            real_basis.extend(real.iter().cloned());
            let target = if near_plus { &mut w_plus } else { &mut w_minus };
            target.extend(real.iter().map(|v| v.iter().map(|c| c.re).collect::<Vec<f64>>()));
        } else if cluster.eigenvalue.im < 0.0 {
            conjugate_dims += cluster.dim();
        } else {
            let p = crate::numerics::project(&cluster.basis, &zc);
            let pn = p.norm();
            let adapted = if pn > tol.theta {
                let head = p.unscale(pn);
                let mut v = vec![head.clone()];
                v.extend(extend_orthonormal(&[head], &cluster.basis, 0.5));
                v
            } else {
                orthonormalize(&cluster.basis, 0.5)
            };
            if adapted.len() != cluster.dim() {
                return Err(Error::numeric("eigenspace basis lost rank", adapted.len() as f64));
            }
            for v in adapted {
                let pair = [v.map(|c| C64::new(c.re, 0.0)), v.map(|c| C64::new(c.im, 0.0))];
                let plane = extend_orthonormal(&real_basis, &pair, 0.25);
                if plane.len() != 2 {
                    return Err(Error::numeric(
                        "complex eigenvector does not span a real plane",
                        plane.len() as f64,
                    ));
                }
                real_basis.extend(plane.iter().cloned());
                let basis = [
                    plane[0].iter().map(|c| c.re).collect::<Vec<f64>>(),
                    plane[1].iter().map(|c| c.re).collect::<Vec<f64>>(),
                ];
                let in_theta = projection_norm_real(&basis, &zr) <= tol.theta;
                planes.push(InvariantPlane {
                    basis,
                    angle: arg,
                    in_theta,
                });
            }
        }
    }
    let out = RealDecomposition {
        w_plus,
        w_minus,
        planes,
    };
    if out.dim() != r.dim() || conjugate_dims != out.planes.len() {
        return Err(Error::numeric(
            format!(
                "invariant decomposition covers {} of {} dimensions ({} conjugate vs {} planes)",
                out.dim(),
                r.dim(),
                conjugate_dims,
                out.planes.len()
            ),
            (out.dim() as f64 - r.dim() as f64).abs(),
        ));
    }
    Ok(out)
}

/// `d − dim(Θ∩W_1) − dim(Θ∩W_{−1}) − 2|K|`, computed entirely from the real decomposition.
pub fn exact_sum_real(r: &OrthogonalMatrix, z: &CVector, tol: &Tolerances) -> Result<ExactSumReport> {
    let dec = real_invariant_planes(r, z, tol)?;
    let zr = real_unit(z)?;
    let d = r.dim();

    let mut per_eigenspace = Vec::new();
    // W^⊥ components (unit vector, weight) for the contraction radius
    let mut components: Vec<(DVector<C64>, f64)> = Vec::new();
    for (basis, lambda) in [(&dec.w_plus, 1.0), (&dec.w_minus, -1.0)] {
        if basis.is_empty() {
            continue;
        }
        let pn = projection_norm_real(basis, &zr);
        let theta_dim = if pn > tol.theta { basis.len() - 1 } else { basis.len() };
        per_eigenspace.push(EigenspaceIntersection {
            eigenvalue: C64::new(lambda, 0.0),
            dim: basis.len(),
            theta_dim,
        });
        if pn > tol.theta {
            let mut p = DVector::<f64>::zeros(d);
            for b in basis {
                let b = DVector::from_column_slice(b);
                p += &b * b.dot(&zr);
            }
            components.push((to_complex(&p.unscale(pn)), pn));
        }
    }
    let mut plane_vectors = Vec::new();
    for plane in dec.planes.iter().filter(|p| !p.in_theta) {
        for b in &plane.basis {
            plane_vectors.push(to_complex(&DVector::from_column_slice(b)));
        }
        let pn = projection_norm_real(&plane.basis, &zr);
        let mut p = DVector::<f64>::zeros(d);
        for b in &plane.basis {
            let b = DVector::from_column_slice(b);
            p += &b * b.dot(&zr);
        }
        components.push((to_complex(&p.unscale(pn)), pn));
    }

    // W^⊥ ∩ Θ: complement of z among the z-components, plus the rest of each plane meeting z.
    let mut basis = complement_in_span(&components);
    let zc = to_complex(&zr);
    let mut existing = vec![zc];
    existing.extend(basis.iter().cloned());
    basis.extend(extend_orthonormal(&existing, &plane_vectors, 1e-6));

    let rc = r.matrix().map(|x| C64::new(x, 0.0));
    let pmat = DMatrix::<C64>::identity(d, d) - &existing[0] * existing[0].adjoint();
    let contraction_radius = spectral_radius_on(&(pmat * rc), &basis)?;

    let theta_w: usize = per_eigenspace.iter().map(|e| e.theta_dim).sum();
    let k = dec.planes_in_theta();
    let dim_w = theta_w + 2 * k;
    Ok(ExactSumReport {
        dimension: d,
        per_eigenspace,
        invariant_planes: dec
            .planes
            .iter()
            .map(|p| PlaneIntersection {
                angle: p.angle,
                in_theta: p.in_theta,
            })
            .collect(),
        dim_w,
        exact_sum: d - dim_w,
        contraction_radius,
    })
}
