//! Complex Schur form `A = Q T Q*`: Householder reduction to Hessenberg form followed by
//! shifted QR sweeps with Givens rotations, Wilkinson shifts and periodic exceptional shifts.
//!
//! Unitary inputs are normal, so the computed `T` is diagonal up to rounding and the columns
//! of `Q` are orthonormal eigenvectors.

use nalgebra::DMatrix;

use super::types::C64;
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
const MAX_SWEEPS_PER_EIGENVALUE: usize = 120;
const EXCEPTIONAL_EVERY: usize = 10;

#[derive(Debug, Clone)]
pub struct Schur {
    pub q: DMatrix<C64>,
    pub t: DMatrix<C64>,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }
}

pub fn complex_schur(a: &DMatrix<C64>) -> Result<Schur> {
    assert!(a.is_square());
    let n = a.nrows();
    let mut t = a.clone();
    let mut q = DMatrix::identity(n, n);
    hessenberg(&mut t, Some(&mut q));
    qr_sweeps(&mut t, Some(&mut q))?;
    Ok(Schur { q, t })
}

/// Eigenvalues of a general square complex matrix (no Schur vectors accumulated).
pub fn eigenvalues(a: &DMatrix<C64>) -> Result<Vec<C64>> {
    assert!(a.is_square());
    let mut t = a.clone();
    hessenberg(&mut t, None);
    qr_sweeps(&mut t, None)?;
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

fn hessenberg(h: &mut DMatrix<C64>, mut q: Option<&mut DMatrix<C64>>) {
    let n = h.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let len = n - k - 1;
        let x: Vec<C64> = (0..len).map(|i| h[(k + 1 + i, k)]).collect();
        let xnorm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|c| c.norm_sqr()).sum::<f64>();
        if xnorm == 0.0 || tail == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in v.iter_mut() {
            *c /= vnorm;
        }

        // H <- (I - 2vv*) H on rows k+1.., then H <- H (I - 2vv*) on columns k+1..
        for j in k..n {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..len {
                dot += v[i].conj() * h[(k + 1 + i, j)];
            }
            for i in 0..len {
                h[(k + 1 + i, j)] -= v[i] * dot * 2.0;
            }
        }
        let apply_right = |m: &mut DMatrix<C64>| {
            for r in 0..m.nrows() {
                let mut dot = C64::new(0.0, 0.0);
                for i in 0..len {
                    dot += m[(r, k + 1 + i)] * v[i];
                }
                for i in 0..len {
                    m[(r, k + 1 + i)] -= dot * v[i].conj() * 2.0;
                }
            }
        };
        apply_right(h);
        if let Some(q) = q.as_deref_mut() {
            apply_right(q);
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
}

/// Rotation `(c, s)` with `G = [[c, s], [-conj(s), c]]` such that `G [a; b] = [r; 0]`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    if b.norm() == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if a.norm() == 0.0 {
        return (0.0, C64::new(1.0, 0.0));
    }
    let an = a.norm();
    let nu = an.hypot(b.norm());
    (an / nu, (a / an) * b.conj() / nu)
}

fn wilkinson_shift(h: &DMatrix<C64>, hi: usize) -> C64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let half_tr = (a + d) * 0.5;
    let disc = (((a - d) * 0.5).powi(2) + b * c).sqrt();
    let (m1, m2) = (half_tr + disc, half_tr - disc);
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

fn qr_sweeps(h: &mut DMatrix<C64>, mut q: Option<&mut DMatrix<C64>>) -> Result<()> {
    let n = h.nrows();
    if n < 2 {
        return Ok(());
    }
    let anorm = h.norm().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut tst = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if tst == 0.0 {
                tst = anorm;
            }
            if sub <= EPS * tst || sub <= EPS * anorm * 1e-3 {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            sweeps = 0;
            continue;
        }
        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::numeric(
                "Schur iteration did not converge",
                h[(hi, hi - 1)].norm(),
            ));
        }
        let shift = if sweeps % EXCEPTIONAL_EVERY == 0 {
            h[(hi, hi)] + h[(hi, hi - 1)].re.abs() * 0.75 + h[(hi, hi - 1)].norm() * 0.25
        } else {
            wilkinson_shift(h, hi)
        };
        qr_step(h, q.as_deref_mut(), lo, hi, shift);
    }
    Ok(())
}

fn qr_step(h: &mut DMatrix<C64>, q: Option<&mut DMatrix<C64>>, lo: usize, hi: usize, shift: C64) {
    let n = h.nrows();
    for k in lo..=hi {
        h[(k, k)] -= shift;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..n {
            let (x, y) = (h[(k, j)], h[(k + 1, j)]);
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        h[(k + 1, k)] = C64::new(0.0, 0.0);
        rots.push((c, s));
    }
    for (k, &(c, s)) in (lo..hi).zip(rots.iter()) {
        for i in 0..=(k + 1).min(hi) {
            let (u, v) = (h[(i, k)], h[(i, k + 1)]);
            h[(i, k)] = u * c + s.conj() * v;
            h[(i, k + 1)] = -s * u + v * c;
        }
    }
    if let Some(q) = q {
        for (k, &(c, s)) in (lo..hi).zip(rots.iter()) {
            for i in 0..n {
                let (u, v) = (q[(i, k)], q[(i, k + 1)]);
                q[(i, k)] = u * c + s.conj() * v;
                q[(i, k + 1)] = -s * u + v * c;
            }
        }
    }
    for k in lo..=hi {
        h[(k, k)] += shift;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::types::unitarity_defect;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn reconstruction_error(a: &DMatrix<C64>, s: &Schur) -> f64 {
        (a - &s.q * &s.t * s.q.adjoint()).camax()
    }

    fn lower_part(t: &DMatrix<C64>) -> f64 {
        let mut worst = 0.0_f64;
        for j in 0..t.ncols() {
            for i in j + 1..t.nrows() {
                worst = worst.max(t[(i, j)].norm());
            }
        }
        worst
    }

    #[test]
    fn general_matrix_is_triangularized() {
        let a = DMatrix::from_fn(6, 6, |i, j| {
            c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0)
        });
        let s = complex_schur(&a).unwrap();
        assert!(reconstruction_error(&a, &s) < 1e-12);
        assert!(unitarity_defect(&s.q) < 1e-13);
        assert!(lower_part(&s.t) < 1e-12);
    }

    #[test]
    fn cyclic_permutation_converges() {
        // unshifted and Wilkinson-shifted QR stall on this matrix without exceptional shifts
        for n in [3usize, 4, 5, 8] {
            let a = DMatrix::from_fn(n, n, |i, j| {
                if i == (j + 1) % n {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            });
            let s = complex_schur(&a).unwrap();
            assert!(reconstruction_error(&a, &s) < 1e-12, "n = {n}");
            let mut eig = s.eigenvalues();
            for l in &eig {
                assert!(((l.powu(n as u32)) - c(1.0, 0.0)).norm() < 1e-12);
            }
            eig.sort_by(|x, y| x.arg().partial_cmp(&y.arg()).unwrap());
            for w in eig.windows(2) {
                assert!((w[1] - w[0]).norm() > 1e-6);
            }
        }
    }

    #[test]
    fn nilpotent_block_has_zero_eigenvalues() {
        let a = DMatrix::from_fn(4, 4, |i, j| if j == i + 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let eig = eigenvalues(&a).unwrap();
        assert!(eig.iter().all(|l| l.norm() < 1e-12));
    }

    #[test]
    fn one_by_one_and_diagonal() {
        let a = DMatrix::from_element(1, 1, c(0.0, 1.0));
        assert_eq!(eigenvalues(&a).unwrap(), vec![c(0.0, 1.0)]);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]));
        let s = complex_schur(&d).unwrap();
        assert!(reconstruction_error(&d, &s) < 1e-15);
    }
}
