use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::gram::extend_orthonormal;
use super::schur::complex_schur;
use super::types::{UnitaryMatrix, C64};
use crate::error::{Error, Result};

/// Default eigenvalue clustering threshold (arc distance): `1e-8 · d`.
pub fn default_cluster_tol(d: usize) -> f64 {
    1e-8 * d as f64
}

/// One eigenvalue of `U` on the unit circle with an orthonormal basis of its eigenspace.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    pub eigenvalue: C64,
    pub basis: Vec<DVector<C64>>,
}

impl EigenCluster {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projector onto the eigenspace.
    pub fn projector(&self) -> DMatrix<C64> {
        let d = self.basis.first().map_or(0, |b| b.len());
        let mut p = DMatrix::zeros(d, d);
        for b in &self.basis {
            p += b * b.adjoint();
        }
        p
    }
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    clusters: Vec<EigenCluster>,
    cluster_tol: f64,
}

impl SpectralDecomposition {
    pub fn clusters(&self) -> &[EigenCluster] {
        &self.clusters
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn dim(&self) -> usize {
        self.clusters.iter().map(EigenCluster::dim).sum()
    }

    /// `Σ_λ λ · P_λ`.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let d = self.dim();
        self.clusters
            .iter()
            .fold(DMatrix::zeros(d, d), |acc, c| acc + c.projector() * c.eigenvalue)
    }
}

/// Angular distance between two points of the unit circle given by their arguments.
pub fn arc_distance(a: f64, b: f64) -> f64 {
    let diff = (a - b).rem_euclid(2.0 * PI);
    diff.min(2.0 * PI - diff)
}

/// Eigen-decomposition of a unitary with eigenvalues grouped by single-linkage in arc distance.
pub fn spectral_decomposition(u: &UnitaryMatrix, cluster_tol: f64) -> Result<SpectralDecomposition> {
    if !(cluster_tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "cluster tolerance must be positive, got {cluster_tol}"
        )));
    }
    let schur = complex_schur(u.matrix())?;
    let angles: Vec<f64> = schur.eigenvalues().iter().map(|l| l.arg()).collect();

    let groups = cluster_angles(&angles, cluster_tol);
    let mut placed: Vec<DVector<C64>> = Vec::with_capacity(u.dim());
    let mut clusters = Vec::with_capacity(groups.len());
    for members in groups {
        let mean: C64 = members.iter().map(|&k| C64::from_polar(1.0, angles[k])).sum();
        let eigenvalue = if mean.norm() > 0.0 {
            mean / mean.norm()
        } else {
            C64::from_polar(1.0, angles[members[0]])
        };
        let columns: Vec<DVector<C64>> = members.iter().map(|&k| schur.q.column(k).into_owned()).collect();
        let basis = extend_orthonormal(&placed, &columns, 0.5);
        if basis.len() != columns.len() {
            return Err(Error::numeric("Schur vectors lost orthogonality", 1.0));
        }
        placed.extend(basis.iter().cloned());
        clusters.push(EigenCluster { eigenvalue, basis });
    }

    let residual_cap = 10.0 * cluster_tol;
    for c in &clusters {
        for v in &c.basis {
            let residual = (u.matrix() * v - v * c.eigenvalue).norm();
            if residual > residual_cap {
                return Err(Error::numeric(
                    format!("eigenvector residual for eigenvalue {} too large", c.eigenvalue),
                    residual,
                ));
            }
        }
    }
    Ok(SpectralDecomposition {
        clusters,
        cluster_tol,
    })
}

/// Groups angle indices into clusters: neighbours on the circle closer than `tol` are linked.
fn cluster_angles(angles: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let n = angles.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| angles[a].total_cmp(&angles[b]));
    if n == 1 {
        return vec![order];
    }
    // gap[i] separates order[i] from order[(i + 1) % n]
    let gap = |i: usize| arc_distance(angles[order[i]], angles[order[(i + 1) % n]]);
    let Some(cut) = (0..n).find(|&i| gap(i) > tol) else {
        return vec![order];
    };
    let mut groups = Vec::new();
    let mut current = Vec::new();
    for step in 1..=n {
        let i = (cut + step) % n;
        current.push(order[i]);
        if gap(i) > tol {
            groups.push(std::mem::take(&mut current));
        }
    }
    debug_assert!(current.is_empty());
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_is_one_cluster() {
        let dec = spectral_decomposition(&UnitaryMatrix::identity(3).unwrap(), 3e-8).unwrap();
        assert_eq!(dec.clusters().len(), 1);
        assert_eq!(dec.clusters()[0].dim(), 3);
        assert!((dec.clusters()[0].eigenvalue - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn distinct_diagonal_entries() {
        let u = UnitaryMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]).unwrap();
        let dec = spectral_decomposition(&u, 3e-8).unwrap();
        assert_eq!(dec.clusters().len(), 3);
        assert!(dec.clusters().iter().all(|cl| cl.dim() == 1));
    }

    #[test]
    fn planar_rotation_matches_analytic_eigenvectors() {
        let phi = PI / 3.0;
        let (s, co) = phi.sin_cos();
        let m = DMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]);
        let u = UnitaryMatrix::new(m).unwrap();
        let dec = spectral_decomposition(&u, 2e-8).unwrap();
        assert_eq!(dec.clusters().len(), 2);
        let r = 1.0 / 2f64.sqrt();
        for cl in dec.clusters() {
            let v = &cl.basis[0];
            assert!((u.matrix() * v - v * cl.eigenvalue).norm() < 1e-10);
            // e^{+i phi} ↔ (1, -i)/√2, e^{-i phi} ↔ (1, i)/√2
            let sign = cl.eigenvalue.im.signum();
            let expect = DVector::from_vec(vec![c(r, 0.0), c(0.0, -sign * r)]);
            assert!((expect.dotc(v).norm() - 1.0).abs() < 1e-12);
            assert!((cl.eigenvalue.arg().abs() - phi).abs() < 1e-12);
        }
    }

    #[test]
    fn wraparound_cluster_at_minus_one() {
        // eigenvalues just above and below the branch cut of arg
        let a = C64::from_polar(1.0, PI - 1e-10);
        let b = C64::from_polar(1.0, -PI + 1e-10);
        let u = UnitaryMatrix::diagonal(&[a, b, c(1.0, 0.0)]).unwrap();
        let dec = spectral_decomposition(&u, 3e-8).unwrap();
        assert_eq!(dec.clusters().len(), 2);
        let minus = dec.clusters().iter().find(|cl| cl.dim() == 2).unwrap();
        assert!((minus.eigenvalue - c(-1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let u = UnitaryMatrix::identity(2).unwrap();
        assert!(matches!(spectral_decomposition(&u, 0.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn cluster_angles_single_linkage_chains() {
        let groups = cluster_angles(&[0.0, 0.5, 1.0, 3.0], 0.6);
        assert_eq!(groups.len(), 2);
        let mut sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3]);
    }
}
