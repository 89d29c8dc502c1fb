use super::{hermitian_eig, ComplexMatrix};
use crate::scalar::Real;

/// Singular values, descending.
///
/// Computed as the nonnegative eigenvalues of the Hermitian dilation
/// `[[0, m], [m^dag, 0]]`, whose spectrum is `±σ_k` padded with zeros. This
/// keeps small singular values accurate to round-off in `|m|`, which a square
/// root of the spectrum of `m^dag m` does not.
pub fn singular_values<R: Real>(m: &ComplexMatrix<R>) -> Vec<R> {
    let (r, c) = m.shape();
    let n = r + c;
    let dilation = ComplexMatrix::from_fn(n, n, |i, j| {
        if i < r && j >= r {
            m[(i, j - r)]
        } else if i >= r && j < r {
            m[(j, i - r)].conj()
        } else {
            num_complex::Complex::new(R::zero(), R::zero())
        }
    });
    let values = hermitian_eig(&dilation)
        .expect("dilation is Hermitian by construction")
        .values;
    values
        .into_iter()
        .take(r.min(c))
        .map(|s| s.max(R::zero()))
        .collect()
}

/// Sum of singular values.
pub fn trace_norm<R: Real>(m: &ComplexMatrix<R>) -> R {
    if m.is_square() && m.is_hermitian(R::epsilon() * m.max_abs()) {
        // Hermitian: |λ| summed directly, no dilation needed.
        return hermitian_eig(m)
            .expect("checked Hermitian")
            .values
            .into_iter()
            .fold(R::zero(), |acc, l| acc + l.abs());
    }
    singular_values(m)
        .into_iter()
        .fold(R::zero(), |acc, s| acc + s)
}

/// Largest singular value.
pub fn spectral_norm<R: Real>(m: &ComplexMatrix<R>) -> R {
    singular_values(m).first().copied().unwrap_or_else(R::zero)
}

/// Frobenius norm `sqrt(Tr[m^dag m])`.
pub fn hs_norm<R: Real>(m: &ComplexMatrix<R>) -> R {
    m.frobenius()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_matrix, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    #[test]
    fn ket_bra_trace_norm() {
        let m = M::unit(2, 0, 1);
        assert!((trace_norm(&m) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn simple_values() {
        let sx = M::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!((spectral_norm(&sx) - 1.0).abs() < 1e-15);
        for d in 2..6 {
            assert!((hs_norm(&M::identity(d)) - (d as f64).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn rectangular_singular_values() {
        // diag(3, 2) padded to 2x3.
        let m = M::from_real(2, 3, &[3.0, 0.0, 0.0, 0.0, -2.0, 0.0]).unwrap();
        let s = singular_values(&m);
        assert_eq!(s.len(), 2);
        assert!((s[0] - 3.0).abs() < 1e-14 && (s[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn norm_ordering_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for k in 0..50 {
            let n = 2 + k % 4;
            let m: M = random_matrix(n, n, &mut rng);
            let (s, h, t) = (spectral_norm(&m), hs_norm(&m), trace_norm(&m));
            assert!(s <= h + 1e-12 && h <= t + 1e-12, "{s} {h} {t}");
            // Cross-check against the Frobenius identity Σσ² = |m|_HS².
            let sv = singular_values(&m);
            let ss: f64 = sv.iter().map(|x| x * x).sum();
            assert!((ss - h * h).abs() < 1e-10);
        }
    }

    #[test]
    fn unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..20 {
            let m: M = random_matrix(4, 4, &mut rng);
            let u: M = random_unitary(4, &mut rng);
            let v: M = random_unitary(4, &mut rng);
            let umv = &(&u * &m) * &v;
            assert!((trace_norm(&umv) - trace_norm(&m)).abs() < 1e-10);
            assert!((spectral_norm(&umv) - spectral_norm(&m)).abs() < 1e-10);
            assert!((hs_norm(&umv) - hs_norm(&m)).abs() < 1e-10);
        }
    }
}
