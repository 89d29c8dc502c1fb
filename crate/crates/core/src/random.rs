//! Random instances for property tests and the randomized reproduction cases.
//!
//! All samplers draw `f64` normals and convert, so a seeded RNG yields the
//! same instance (up to rounding) in either precision.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::{canonical_kraus, Channel};
use crate::linalg::{inner, vec_norm, ComplexMatrix};
use crate::scalar::{real, Real};

fn gaussian<R: Real, G: Rng + ?Sized>(rng: &mut G) -> Complex<R> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(R::lit(re), R::lit(im))
}

/// Matrix of i.i.d. standard complex Gaussian entries.
pub fn random_matrix<R: Real, G: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut G) -> ComplexMatrix<R> {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_vector<R: Real, G: Rng + ?Sized>(n: usize, rng: &mut G) -> Vec<Complex<R>> {
    (0..n).map(|_| gaussian(rng)).collect()
}

/// Uniformly random unit vector.
pub fn random_pure<R: Real, G: Rng + ?Sized>(n: usize, rng: &mut G) -> Vec<Complex<R>> {
    let v = random_vector::<R, _>(n, rng);
    let norm = vec_norm(&v);
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_hermitian<R: Real, G: Rng + ?Sized>(n: usize, rng: &mut G) -> ComplexMatrix<R> {
    random_matrix::<R, _>(n, n, rng).hermitian_part()
}

/// `G G^dag` with `G` an `n x rank` Gaussian matrix.
pub fn random_psd<R: Real, G: Rng + ?Sized>(n: usize, rank: usize, rng: &mut G) -> ComplexMatrix<R> {
    let g = random_matrix::<R, _>(n, rank, rng);
    (&g * &g.dagger()).hermitian_part()
}

/// Full-rank random density matrix (Hilbert-Schmidt measure).
pub fn random_density<R: Real, G: Rng + ?Sized>(n: usize, rng: &mut G) -> ComplexMatrix<R> {
    let p = random_psd::<R, _>(n, n, rng);
    let tr = p.trace().re;
    p.scale_real(R::one() / tr)
}

pub fn random_pure_density<R: Real, G: Rng + ?Sized>(n: usize, rng: &mut G) -> ComplexMatrix<R> {
    let v = random_pure::<R, _>(n, rng);
    ComplexMatrix::outer(&v, &v)
}

/// Haar-random isometry `C^cols -> C^rows` (`rows >= cols`) from Gram-Schmidt on
/// a Gaussian matrix.
pub fn random_isometry<R: Real, G: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut G) -> ComplexMatrix<R> {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = random_matrix::<R, _>(rows, cols, rng);
    let mut q: Vec<Vec<Complex<R>>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = g.col(j);
        // Two passes of modified Gram-Schmidt keep orthogonality at round-off.
        for _ in 0..2 {
            for u in &q {
                let proj = inner(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi = *vi - *ui * proj;
                }
            }
        }
        let norm = vec_norm(&v);
        q.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| q[j][i])
}

pub fn random_unitary<R: Real, G: Rng + ?Sized>(n: usize, rng: &mut G) -> ComplexMatrix<R> {
    random_isometry(n, n, rng)
}

/// Random channel with `kraus_count` Kraus operators, sliced from a Haar
/// isometry `C^d -> C^(d·k)`.
pub fn random_channel<R: Real, G: Rng + ?Sized>(d: usize, kraus_count: usize, rng: &mut G) -> Channel<R> {
    let v = random_isometry::<R, _>(d * kraus_count, d, rng);
    let kraus = (0..kraus_count)
        .map(|k| ComplexMatrix::from_fn(d, d, |i, j| v[(k * d + i, j)]))
        .collect();
    Channel::new(kraus).expect("isometry slices are trace preserving")
}

/// Random amplitude vector with squared norm drawn uniformly from `[0, 1]`.
pub fn random_env<R: Real, G: Rng + ?Sized>(n: usize, rng: &mut G) -> Vec<Complex<R>> {
    let v = random_pure::<R, _>(n, rng);
    let r = R::lit(rng.random::<f64>().sqrt());
    v.into_iter().map(|z| z * r).collect()
}

/// Random admissible transformation matrix for `ch`: `T = Σ_k x_k C_k` over
/// the canonical Kraus operators, with `x` drawn by [`random_env`], so that
/// `<<T|C⁺|T>> = |x|²` is uniform in `[0, 1]`.
pub fn random_admissible_t<R: Real, G: Rng + ?Sized>(ch: &Channel<R>, rng: &mut G) -> ComplexMatrix<R> {
    let canonical = canonical_kraus(&ch.choi(), R::rank_cutoff()).expect("valid channel");
    let x = random_env::<R, _>(canonical.kraus_count(), rng);
    let d = ch.dim();
    canonical
        .kraus()
        .iter()
        .zip(&x)
        .fold(ComplexMatrix::zeros(d, d), |acc, (k, xk)| &acc + &k.scale(*xk))
}

/// Gaussian `d x d` matrix rescaled to `Tr[T^dag T] = target`.
pub fn random_matrix_with_norm<R: Real, G: Rng + ?Sized>(d: usize, target: R, rng: &mut G) -> ComplexMatrix<R> {
    let m = random_matrix::<R, _>(d, d, rng);
    let f = m.frobenius();
    m.scale(real(target.sqrt() / f))
}
