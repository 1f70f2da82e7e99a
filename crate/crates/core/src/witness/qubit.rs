//! The two-dimensional case expressed through navigation functions.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{CVector, UnitaryMatrix, C64};

/// `sin²(x/2)`.
pub fn haversin(x: f64) -> f64 {
    (x / 2.0).sin().powi(2)
}

/// `cos²(x/2)`.
pub fn havercosin(x: f64) -> f64 {
    (x / 2.0).cos().powi(2)
}

/// Latitude of the start point on the Bloch sphere and the longitude difference of the
/// rotation about the polar axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitParams {
    pub latitude: f64,
    pub longitude_diff: f64,
}

impl QubitParams {
    pub fn new(latitude: f64, longitude_diff: f64) -> Self {
        QubitParams {
            latitude,
            longitude_diff,
        }
    }

    /// Probability of returning to the start state in one step.
    pub fn p(&self) -> f64 {
        qubit_p(*self)
    }

    /// The unitary `diag(e^{−iλ/2}, e^{iλ/2})` (rotation by `λ` about the polar axis) and the
    /// state at the given latitude.
    pub fn process_parts(&self) -> (UnitaryMatrix, CVector) {
        let half = self.longitude_diff / 2.0;
        let u = UnitaryMatrix::diagonal(&[C64::from_polar(1.0, -half), C64::from_polar(1.0, half)])
            .expect("diagonal phases are unitary");
        let polar = std::f64::consts::FRAC_PI_2 - self.latitude;
        let z = CVector::from_real(&[(polar / 2.0).cos(), (polar / 2.0).sin()])
            .expect("finite entries");
        (u, z)
    }
}

/// `p = 1 − cos²φ · haversin λ`.
pub fn qubit_p(params: QubitParams) -> f64 {
    (1.0 - params.latitude.cos().powi(2) * haversin(params.longitude_diff)).clamp(0.0, 1.0)
}

/// A real planar rotation `U` and `z = e_1` with `|⟨z|Uz⟩|² = p`.
pub fn qubit_rotation_for(p: f64) -> Result<(UnitaryMatrix, CVector)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!("probability out of range: {p}")));
    }
    let c = p.sqrt();
    let s = (1.0 - p).sqrt();
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)],
    );
    Ok((UnitaryMatrix::new(m)?, CVector::basis(2, 0)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn return_is_certain_at_pole_or_without_motion() {
        for lam in [0.0, 0.5, 2.0, PI, 5.0] {
            assert!((qubit_p(QubitParams::new(PI / 2.0, lam)) - 1.0).abs() < 1e-15);
        }
        for lat in [-1.0, 0.0, 0.7] {
            assert_eq!(qubit_p(QubitParams::new(lat, 0.0)), 1.0);
        }
    }

    #[test]
    fn antipodal_equatorial_move() {
        assert!(qubit_p(QubitParams::new(0.0, PI)).abs() < 1e-15);
        assert!((haversin(PI) - 1.0).abs() < 1e-15);
        assert!((havercosin(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn formula_matches_overlap_of_the_state_model() {
        for (lat, lam) in [(0.715, 1.3), (-0.2, 4.0), (1.2, 0.1), (0.0, 2.5)] {
            let params = QubitParams::new(lat, lam);
            let (u, z) = params.process_parts();
            let overlap = z.dotc(&(u.matrix() * &*z)).norm_sqr();
            assert!((overlap - params.p()).abs() < 1e-14, "({lat}, {lam})");
        }
    }

    #[test]
    fn rotation_for_p() {
        let (u, z) = qubit_rotation_for(0.3).unwrap();
        let overlap = z.dotc(&(u.matrix() * &*z)).norm_sqr();
        assert!((overlap - 0.3).abs() < 1e-15);
        assert!(qubit_rotation_for(1.5).is_err());
    }
}
