use std::ops::Deref;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default tolerance on `‖U*U − I‖_max` (and `‖RᵀR − I‖_max`).
pub const DEFAULT_UNITARITY_TOL: f64 = 1e-10;

/// A nonempty complex vector with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector(DVector<C64>);

impl CVector {
    pub fn new(entries: DVector<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if entries.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidVector("non-finite entry".into()));
        }
        Ok(CVector(entries))
    }

    pub fn from_slice(entries: &[C64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(entries))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(DVector::from_iterator(
            entries.len(),
            entries.iter().map(|&x| C64::new(x, 0.0)),
        ))
    }

    /// The `k`-th standard basis vector of `ℂ^d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if k >= d {
            return Err(Error::InvalidInput(format!(
                "basis index {k} out of range for dimension {d}"
            )));
        }
        let mut v = DVector::zeros(d);
        v[k] = C64::new(1.0, 0.0);
        Ok(CVector(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Returns the vector scaled to unit norm. Zero vectors are rejected.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.0.norm();
        if n == 0.0 {
            return Err(Error::InvalidVector("zero vector".into()));
        }
        Ok(CVector(self.0.unscale(n)))
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.0.iter().all(|c| c.im == 0.0)
    }

    pub fn into_inner(self) -> DVector<C64> {
        self.0
    }
}

impl Deref for CVector {
    type Target = DVector<C64>;

    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

/// A square complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::InvalidMatrix(format!(
                "matrix is {}x{}, expected square",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.nrows() == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if entries.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(CMatrix(entries))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }
}

impl Deref for CMatrix {
    type Target = DMatrix<C64>;

    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

/// Entrywise max-norm of `A*A − I`.
pub fn unitarity_defect(a: &DMatrix<C64>) -> f64 {
    let gram = a.adjoint() * a;
    max_abs_minus_identity(&gram)
}

pub(crate) fn max_abs_minus_identity(gram: &DMatrix<C64>) -> f64 {
    let n = gram.nrows();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for i in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).norm());
        }
    }
    worst
}

/// A validated unitary evolution `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    matrix: CMatrix,
    tol_unitarity: f64,
}

impl UnitaryMatrix {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerance(matrix, DEFAULT_UNITARITY_TOL)
    }

    pub fn with_tolerance(matrix: DMatrix<C64>, tol_unitarity: f64) -> Result<Self> {
        if !(tol_unitarity >= 0.0) {
            return Err(Error::InvalidInput("negative unitarity tolerance".into()));
        }
        let matrix = CMatrix::new(matrix)?;
        let defect = unitarity_defect(&matrix);
        if defect > tol_unitarity {
            return Err(Error::InvalidMatrix(format!(
                "not unitary: |U*U - I|_max = {defect:e} exceeds {tol_unitarity:e}"
            )));
        }
        Ok(UnitaryMatrix {
            matrix,
            tol_unitarity,
        })
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::new(DMatrix::identity(d, d))
    }

    /// Diagonal unitary with the given unit-modulus entries.
    pub fn diagonal(entries: &[C64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn tol_unitarity(&self) -> f64 {
        self.tol_unitarity
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &UnitaryMatrix) -> Result<Self> {
        let (a, b) = (self.dim(), other.dim());
        let mut m = DMatrix::zeros(a + b, a + b);
        m.view_mut((0, 0), (a, a)).copy_from(self.matrix());
        m.view_mut((a, a), (b, b)).copy_from(other.matrix());
        Self::with_tolerance(m, self.tol_unitarity.max(other.tol_unitarity))
    }
}

/// A validated real orthogonal matrix `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMatrix {
    matrix: DMatrix<f64>,
    tol_orthogonality: f64,
}

impl OrthogonalMatrix {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(matrix, DEFAULT_UNITARITY_TOL)
    }

    pub fn with_tolerance(matrix: DMatrix<f64>, tol_orthogonality: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidMatrix(format!(
                "matrix is {}x{}, expected square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let gram = matrix.transpose() * &matrix;
        let d = matrix.nrows();
        let defect = (gram - DMatrix::<f64>::identity(d, d)).amax();
        if defect > tol_orthogonality {
            return Err(Error::InvalidMatrix(format!(
                "not orthogonal: |R^T R - I|_max = {defect:e} exceeds {tol_orthogonality:e}"
            )));
        }
        Ok(OrthogonalMatrix {
            matrix,
            tol_orthogonality,
        })
    }

    /// Planar rotation by `phi`.
    pub fn rotation2(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        OrthogonalMatrix {
            matrix: DMatrix::from_row_slice(2, 2, &[c, -s, s, c]),
            tol_orthogonality: DEFAULT_UNITARITY_TOL,
        }
    }

    /// Reflection about the line through the origin at angle `phi` to the first axis.
    pub fn reflection2(phi: f64) -> Self {
        let (s, c) = (2.0 * phi).sin_cos();
        OrthogonalMatrix {
            matrix: DMatrix::from_row_slice(2, 2, &[c, s, s, -c]),
            tol_orthogonality: DEFAULT_UNITARITY_TOL,
        }
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::new(DMatrix::identity(d, d))
    }

    pub fn direct_sum(&self, other: &OrthogonalMatrix) -> Result<Self> {
        let (a, b) = (self.dim(), other.dim());
        let mut m = DMatrix::zeros(a + b, a + b);
        m.view_mut((0, 0), (a, a)).copy_from(&self.matrix);
        m.view_mut((a, a), (b, b)).copy_from(&other.matrix);
        Self::with_tolerance(m, self.tol_orthogonality.max(other.tol_orthogonality))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn tol_orthogonality(&self) -> f64 {
        self.tol_orthogonality
    }

    /// The same map viewed as a unitary on `ℂ^d`.
    pub fn complexify(&self) -> UnitaryMatrix {
        UnitaryMatrix {
            matrix: CMatrix(self.matrix.map(|x| C64::new(x, 0.0))),
            tol_unitarity: self.tol_orthogonality,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_nonfinite() {
        assert_eq!(CVector::from_slice(&[]), Err(Error::InvalidDimension(0)));
        assert!(CVector::from_real(&[1.0, f64::NAN]).is_err());
        assert!(CMatrix::new(DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn unitary_validation() {
        assert!(UnitaryMatrix::identity(3).is_ok());
        let bad = DMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(matches!(UnitaryMatrix::new(bad), Err(Error::InvalidMatrix(_))));
        let near = DMatrix::from_diagonal_element(2, 2, C64::new(1.0 + 1e-12, 0.0));
        assert!(UnitaryMatrix::new(near).is_ok());
    }

    #[test]
    fn orthogonal_constructors() {
        let r = OrthogonalMatrix::rotation2(0.3);
        assert!(OrthogonalMatrix::new(r.matrix().clone()).is_ok());
        let f = OrthogonalMatrix::reflection2(0.3);
        assert!((f.matrix().determinant() + 1.0).abs() < 1e-14);
        let sum = r.direct_sum(&OrthogonalMatrix::identity(1).unwrap()).unwrap();
        assert_eq!(sum.dim(), 3);
        assert!(unitarity_defect(sum.complexify().matrix()) < 1e-15);
    }

    #[test]
    fn normalized_rejects_zero() {
        let z = CVector::from_real(&[0.0, 0.0]).unwrap();
        assert!(z.normalized().is_err());
        let v = CVector::from_real(&[3.0, 4.0]).unwrap().normalized().unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }
}
