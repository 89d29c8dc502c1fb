use num_complex::Complex;
use num_traits::Zero;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 64;

/// Spectral decomposition `m = V diag(values) V^dag` of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order; column `k` of `vectors` is the
/// eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEig<R> {
    pub values: Vec<R>,
    pub vectors: ComplexMatrix<R>,
}

impl<R: Real> HermitianEig<R> {
    pub fn vector(&self, k: usize) -> Vec<Complex<R>> {
        self.vectors.col(k)
    }

    pub fn max_value(&self) -> R {
        self.values.first().copied().unwrap_or_else(R::zero)
    }

    pub fn min_value(&self) -> R {
        self.values.last().copied().unwrap_or_else(R::zero)
    }

    pub fn reconstruct(&self) -> ComplexMatrix<R> {
        let v = &self.vectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            self.values
                .iter()
                .enumerate()
                .map(|(k, &l)| v[(i, k)] * v[(j, k)].conj() * l)
                .sum()
        })
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input must be Hermitian to within `R::DEFAULT_TOL` relative to its
/// largest entry; only the Hermitian part is diagonalised.
pub fn hermitian_eig<R: Real>(m: &ComplexMatrix<R>) -> Result<HermitianEig<R>> {
    let n = m.require_square()?;
    let scale = m.max_abs().max(R::one());
    let dev = m.hermitian_deviation();
    if dev > R::default_tol() * scale {
        return Err(Error::NotHermitian(dev.as_f64()));
    }
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::<R>::identity(n);

    let total = a.frobenius();
    let eps = R::epsilon();
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off = off_diagonal_norm(&a);
        if off <= eps * total || off <= R::min_positive_value() {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        let off = off_diagonal_norm(&a);
        // Jacobi stalls only at the round-off floor; accept anything close to it.
        if off > R::lit(64.0) * eps * total.max(R::one()) {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<R> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEig { values, vectors })
}

/// Eigenvalues only, descending.
pub fn eigvalsh<R: Real>(m: &ComplexMatrix<R>) -> Result<Vec<R>> {
    Ok(hermitian_eig(m)?.values)
}

fn off_diagonal_norm<R: Real>(a: &ComplexMatrix<R>) -> R {
    let n = a.rows();
    let mut s = R::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `U = P R`, where `P` removes the
/// phase of `a[p][q]` and `R` is a real Jacobi rotation.
fn rotate<R: Real>(a: &mut ComplexMatrix<R>, v: &mut ComplexMatrix<R>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r <= R::min_positive_value() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / r; // e^{i phi}
    let tau = (aqq - app) / (r + r);
    let t = if tau >= R::zero() {
        R::one() / (tau + (R::one() + tau * tau).sqrt())
    } else {
        -R::one() / (-tau + (R::one() + tau * tau).sqrt())
    };
    let cs = R::one() / (R::one() + t * t).sqrt();
    let sn = t * cs;
    let n = a.rows();

    // U_pp = c, U_pq = s, U_qp = -s e^{-i phi}, U_qq = c e^{-i phi}
    let upp = Complex::new(cs, R::zero());
    let upq = Complex::new(sn, R::zero());
    let uqp = -phase.conj() * sn;
    let uqq = phase.conj() * cs;

    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * upp + aiq * uqp;
        a[(i, q)] = aip * upq + aiq * uqq;
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * upp + viq * uqp;
        v[(i, q)] = vip * upq + viq * uqq;
    }
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = upp.conj() * apj + uqp.conj() * aqj;
        a[(q, j)] = upq.conj() * apj + uqq.conj() * aqj;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, R::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, R::zero());
}
