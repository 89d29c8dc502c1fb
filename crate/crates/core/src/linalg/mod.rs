//! Dense complex linear algebra shared by the rest of the crate.
//!
//! Conventions: computational basis, 0-indexed; in a tensor product the first
//! factor is the slowest index, so `a.kron(&b)` is laid out in blocks indexed
//! by `a`'s entries.

mod eig;
mod matrix;
mod norms;

pub use eig::{eigvalsh, hermitian_eig, HermitianEig};
pub use matrix::{sum_matrices, ComplexMatrix, Keep};
pub use norms::{hs_norm, singular_values, spectral_norm, trace_norm};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Kronecker product `a ⊗ b`.
pub fn tensor<R: Real>(a: &ComplexMatrix<R>, b: &ComplexMatrix<R>) -> ComplexMatrix<R> {
    a.kron(b)
}

pub fn partial_trace<R: Real>(
    m: &ComplexMatrix<R>,
    dim_first: usize,
    dim_second: usize,
    keep: Keep,
) -> Result<ComplexMatrix<R>> {
    m.partial_trace(dim_first, dim_second, keep)
}

/// Choi vector `|T>> = Σ_m |m> ⊗ T|m>` of an operator `T: H_in -> H_out`.
///
/// Amplitude `(m, n)` sits at index `m * dim_out + n` and equals `T[n][m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiVector<R> {
    pub dim_in: usize,
    pub dim_out: usize,
    pub amplitudes: Vec<Complex<R>>,
}

impl<R: Real> ChoiVector<R> {
    pub fn new(dim_in: usize, dim_out: usize, amplitudes: Vec<Complex<R>>) -> Result<Self> {
        if amplitudes.len() != dim_in * dim_out {
            return Err(Error::dims(dim_in * dim_out, amplitudes.len()));
        }
        Ok(Self {
            dim_in,
            dim_out,
            amplitudes,
        })
    }

    pub fn norm_sqr(&self) -> R {
        self.amplitudes
            .iter()
            .fold(R::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// `<<self|other>>`.
    pub fn inner(&self, other: &Self) -> Complex<R> {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|self>><<self|`.
    pub fn projector(&self) -> ComplexMatrix<R> {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }
}

pub fn choi_vec<R: Real>(t: &ComplexMatrix<R>) -> ChoiVector<R> {
    let (dim_out, dim_in) = t.shape();
    let mut amplitudes = Vec::with_capacity(dim_in * dim_out);
    for m in 0..dim_in {
        for n in 0..dim_out {
            amplitudes.push(t[(n, m)]);
        }
    }
    ChoiVector {
        dim_in,
        dim_out,
        amplitudes,
    }
}

/// Inverse of [`choi_vec`]: `T = Σ_{m,n} <m,n|T>> |n><m|`.
pub fn unvec<R: Real>(v: &ChoiVector<R>) -> ComplexMatrix<R> {
    ComplexMatrix::from_fn(v.dim_out, v.dim_in, |n, m| v.amplitudes[m * v.dim_out + n])
}

/// `<x|y>`.
pub fn inner<R: Real>(x: &[Complex<R>], y: &[Complex<R>]) -> Complex<R> {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm<R: Real>(x: &[Complex<R>]) -> R {
    x.iter().fold(R::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

/// Moore-Penrose pseudoinverse of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues at or below `rank_tol * λ_max` are treated as zero. An
/// eigenvalue below `-R::DEFAULT_TOL * max(1, λ_max)` is an error.
pub fn pseudoinverse<R: Real>(m: &ComplexMatrix<R>, rank_tol: R) -> Result<ComplexMatrix<R>> {
    let eig = hermitian_eig(m)?;
    pseudoinverse_from_eig(&eig, rank_tol)
}

pub(crate) fn pseudoinverse_from_eig<R: Real>(
    eig: &HermitianEig<R>,
    rank_tol: R,
) -> Result<ComplexMatrix<R>> {
    let lmax = eig.max_value();
    let lmin = eig.min_value();
    if lmin < -R::default_tol() * lmax.max(R::one()) {
        return Err(Error::NotPositive(lmin.as_f64()));
    }
    let n = eig.vectors.rows();
    let cutoff = rank_tol * lmax;
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &l) in eig.values.iter().enumerate() {
        if l <= cutoff || l <= R::zero() {
            continue;
        }
        let inv = real(R::one() / l);
        for i in 0..n {
            let vi = eig.vectors[(i, k)] * inv;
            if vi.is_zero() {
                continue;
            }
            for j in 0..n {
                out[(i, j)] = out[(i, j)] + vi * eig.vectors[(j, k)].conj();
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_matrix, random_psd};
    use crate::scalar::c;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    #[test]
    fn choi_vec_identity_and_pauli_x() {
        let one = c::<f64>(1.0, 0.0);
        let zero = c::<f64>(0.0, 0.0);
        assert_eq!(choi_vec(&M::identity(2)).amplitudes, vec![one, zero, zero, one]);
        let sx = M::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(choi_vec(&sx).amplitudes, vec![zero, one, one, zero]);
    }

    #[test]
    fn choi_vec_rectangular_layout() {
        // T: C^2 -> C^3, T|m> is column m.
        let t = M::from_fn(3, 2, |n, m| c((10 * n + m) as f64, 0.0));
        let v = choi_vec(&t);
        assert_eq!(v.dim_in, 2);
        assert_eq!(v.dim_out, 3);
        assert_eq!(v.amplitudes[3 + 2], c(21.0, 0.0));
        assert_eq!(unvec(&v), t);
    }

    #[test]
    fn unvec_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let t: M = random_matrix(3, 3, &mut rng);
            assert_eq!(unvec(&choi_vec(&t)), t);
        }
    }

    #[test]
    fn pseudoinverse_depolarising_choi() {
        let n = M::identity(4).scale_real(0.5);
        let p = pseudoinverse(&n, 1e-12).unwrap();
        assert!(p.approx_eq(&M::identity(4).scale_real(2.0), 1e-14));
    }

    #[test]
    fn pseudoinverse_of_projector() {
        let s = 1.0 / 3f64.sqrt();
        let v = [c(s, 0.0), c(0.0, s), c(-s, 0.0)];
        let p = M::outer(&v, &v);
        assert!(pseudoinverse(&p, 1e-12).unwrap().approx_eq(&p, 1e-13));
    }

    #[test]
    fn pseudoinverse_moore_penrose_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, rank) in [(4, 2), (6, 6), (6, 3), (9, 1)] {
            let a: M = random_psd(n, rank, &mut rng);
            let ap = pseudoinverse(&a, 1e-12).unwrap();
            assert!((&(&ap * &a) * &ap).approx_eq(&ap, 1e-10), "C+CC+ = C+");
            assert!((&(&a * &ap) * &a).approx_eq(&a, 1e-10), "CC+C = C");
            let proj = &a * &ap;
            assert!(proj.is_hermitian(1e-10));
            assert!((&ap * &a).is_hermitian(1e-10));
            assert!((&proj * &proj).approx_eq(&proj, 1e-10));
            let tr = proj.trace().re;
            assert!((tr - rank as f64).abs() < 1e-9, "projector rank");
        }
    }

    #[test]
    fn pseudoinverse_rejects_negative() {
        let m = M::from_real(2, 2, &[1.0, 0.0, 0.0, -0.5]).unwrap();
        assert!(matches!(pseudoinverse(&m, 1e-12), Err(Error::NotPositive(_))));
    }
}
