use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::rng::SeedStream;
use super::types::{OrthogonalMatrix, UnitaryMatrix, C64};
use crate::error::{Error, Result};

/// Haar-distributed (CUE) unitary drawn from `stream`.
pub fn haar_unitary(d: usize, stream: &SeedStream) -> Result<UnitaryMatrix> {
    haar_unitary_with(d, &mut stream.rng())
}

/// Complex Ginibre matrix, QR, then columns of `Q` multiplied by the phases of `diag(R)`.
pub fn haar_unitary_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<UnitaryMatrix> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let ginibre = DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * scale, im * scale)
    });
    let qr = ginibre.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        q.column_mut(j).iter_mut().for_each(|x| *x *= phase);
    }
    UnitaryMatrix::with_tolerance(q, 1e-12)
}

/// Haar-distributed real orthogonal matrix drawn from `stream`.
pub fn haar_orthogonal(d: usize, stream: &SeedStream) -> Result<OrthogonalMatrix> {
    haar_orthogonal_with(d, &mut stream.rng())
}

pub fn haar_orthogonal_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<OrthogonalMatrix> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let ginibre = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let (mut q, r) = ginibre.qr().unpack();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    OrthogonalMatrix::with_tolerance(q, 1e-12)
}
