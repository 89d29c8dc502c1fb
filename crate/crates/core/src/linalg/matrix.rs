use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<R>>,
}

/// Which tensor factor survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

impl<R: Real> ComplexMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<R>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadShape {
                rows,
                cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<Complex<R>>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * m);
        for row in rows {
            if row.len() != m {
                return Err(Error::BadShape {
                    rows: n,
                    cols: m,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: n,
            cols: m,
            data,
        })
    }

    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_vec(
            rows,
            cols,
            entries.iter().map(|&x| real(R::lit(x))).collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<R>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diag_real(diag: &[R]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = real(x);
        }
        m
    }

    /// Column vector from amplitudes.
    pub fn column(v: &[Complex<R>]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// `|x><y|`.
    pub fn outer(x: &[Complex<R>], y: &[Complex<R>]) -> Self {
        Self::from_fn(x.len(), y.len(), |i, j| x[i] * y[j].conj())
    }

    /// `|k><k|` in dimension `d`.
    pub fn basis_projector(d: usize, k: usize) -> Self {
        let mut m = Self::zeros(d, d);
        m[(k, k)] = Complex::one();
        m
    }

    /// `|i><j|` in dimension `d`.
    pub fn unit(d: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(d, d);
        m[(i, j)] = Complex::one();
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[Complex<R>] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex<R>> {
        self.data
    }

    pub fn col(&self, j: usize) -> Vec<Complex<R>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn require_shape(&self, rows: usize, cols: usize) -> Result<()> {
        if self.shape() == (rows, cols) {
            Ok(())
        } else {
            Err(Error::dims(
                format!("{rows}x{cols}"),
                format!("{}x{}", self.rows, self.cols),
            ))
        }
    }

    pub fn map(&self, f: impl Fn(Complex<R>) -> Complex<R>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex<R>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: R) -> Self {
        self.map(|z| z * s)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex<R> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Fallible product; the `Mul` impls panic on a shape mismatch instead.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::dims(
                format!("{} rows on the right", self.cols),
                rhs.rows,
            ));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in dst.iter_mut().zip(row) {
                    *o = *o + a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Complex<R>]) -> Vec<Complex<R>> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `self * x * self^dag`.
    pub fn sandwich(&self, x: &Self) -> Self {
        &(self * x) * &self.dagger()
    }

    /// Kronecker product; the first factor indexes blocks.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        let mut out = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out[(i * rhs.rows + k, j * rhs.cols + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Partial trace of a square operator on `dim_first x dim_second`.
    pub fn partial_trace(&self, dim_first: usize, dim_second: usize, keep: Keep) -> Result<Self> {
        let n = self.require_square()?;
        if n != dim_first * dim_second {
            return Err(Error::dims(
                format!("side {}x{}={}", dim_first, dim_second, dim_first * dim_second),
                n,
            ));
        }
        let out = match keep {
            Keep::First => Self::from_fn(dim_first, dim_first, |i, j| {
                (0..dim_second)
                    .map(|k| self[(i * dim_second + k, j * dim_second + k)])
                    .sum()
            }),
            Keep::Second => Self::from_fn(dim_second, dim_second, |k, l| {
                (0..dim_first)
                    .map(|i| self[(i * dim_second + k, i * dim_second + l)])
                    .sum()
            }),
        };
        Ok(out)
    }

    /// Square sub-block `(bi, bj)` of side `size`.
    pub fn block(&self, bi: usize, bj: usize, size: usize) -> Self {
        Self::from_fn(size, size, |i, j| self[(bi * size + i, bj * size + j)])
    }

    /// Assembles a 2x2 block matrix `[[a, b], [c, d]]` of equal square blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.rows;
        Self::from_fn(2 * n, 2 * n, |i, j| {
            let blk = match (i / n, j / n) {
                (0, 0) => a,
                (0, 1) => b,
                (1, 0) => c,
                _ => d,
            };
            blk[(i % n, j % n)]
        })
    }

    /// Hilbert-Schmidt inner product `Tr[self^dag rhs]`.
    pub fn hs_inner(&self, rhs: &Self) -> Complex<R> {
        self.data.iter().zip(&rhs.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn frobenius(&self) -> R {
        self.data
            .iter()
            .fold(R::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    pub fn max_abs(&self) -> R {
        self.data.iter().fold(R::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Largest entrywise modulus of `self - rhs`; infinite on a shape mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> R {
        if self.shape() != rhs.shape() {
            return R::infinity();
        }
        self.data
            .iter()
            .zip(&rhs.data)
            .fold(R::zero(), |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn approx_eq(&self, rhs: &Self, tol: R) -> bool {
        self.max_abs_diff(rhs) <= tol
    }

    pub fn hermitian_deviation(&self) -> R {
        if !self.is_square() {
            return R::infinity();
        }
        let mut dev = R::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: R) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `|u^dag u - 1|` entrywise; zero for an isometry.
    pub fn isometry_deviation(&self) -> R {
        (self.dagger() * self).max_abs_diff(&Self::identity(self.cols))
    }

    pub fn is_unitary(&self, tol: R) -> bool {
        self.is_square() && self.isometry_deviation() <= tol
    }

    /// Hermitian part `(m + m^dag)/2`, used to strip round-off asymmetry.
    pub fn hermitian_part(&self) -> Self {
        let half = R::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * half
        })
    }

    /// Checks Hermiticity, unit trace and positivity.
    pub fn validate_density(&self, tol: R) -> Result<()> {
        self.require_square()?;
        let dev = self.hermitian_deviation();
        if dev > tol {
            return Err(Error::NotHermitian(dev.as_f64()));
        }
        let tr = self.trace();
        if (tr.re - R::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidTrace(tr.re.as_f64()));
        }
        let eig = super::hermitian_eig(&self.hermitian_part())?;
        let min = eig.min_value();
        if min < -tol {
            return Err(Error::NotPositive(min.as_f64()));
        }
        Ok(())
    }

    /// Converts the scalar type.
    pub fn cast<S: Real>(&self) -> ComplexMatrix<S> {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(S::lit(z.re.as_f64()), S::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

impl<R> Index<(usize, usize)> for ComplexMatrix<R> {
    type Output = Complex<R>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<R> IndexMut<(usize, usize)> for ComplexMatrix<R> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<R: Real> Mul for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;

    fn mul(self, rhs: Self) -> ComplexMatrix<R> {
        self.matmul(rhs).expect("matrix product shape")
    }
}

impl<R: Real> Mul<&ComplexMatrix<R>> for ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;

    fn mul(self, rhs: &ComplexMatrix<R>) -> ComplexMatrix<R> {
        &self * rhs
    }
}

impl<R: Real> Mul for ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;

    fn mul(self, rhs: Self) -> ComplexMatrix<R> {
        &self * &rhs
    }
}

fn zip_with<R: Real>(
    a: &ComplexMatrix<R>,
    b: &ComplexMatrix<R>,
    f: impl Fn(Complex<R>, Complex<R>) -> Complex<R>,
) -> ComplexMatrix<R> {
    assert_eq!(a.shape(), b.shape(), "elementwise shape");
    ComplexMatrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(&x, &y)| f(x, y)).collect(),
    }
}

impl<R: Real> Add for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;

    fn add(self, rhs: Self) -> ComplexMatrix<R> {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl<R: Real> Add for ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;

    fn add(self, rhs: Self) -> ComplexMatrix<R> {
        &self + &rhs
    }
}

impl<R: Real> Sub for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;

    fn sub(self, rhs: Self) -> ComplexMatrix<R> {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl<R: Real> Sub for ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;

    fn sub(self, rhs: Self) -> ComplexMatrix<R> {
        &self - &rhs
    }
}

impl<R: Real> Neg for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;

    fn neg(self) -> ComplexMatrix<R> {
        self.map(|z| -z)
    }
}

impl<R: fmt::Debug> fmt::Debug for ComplexMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = &self.data[i * self.cols + j];
                write!(f, "({:?}, {:?}) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Sums matrices of a common shape; `None` for an empty iterator.
pub fn sum_matrices<R: Real, I>(iter: I) -> Option<ComplexMatrix<R>>
where
    I: IntoIterator<Item = ComplexMatrix<R>>,
{
    iter.into_iter().reduce(|acc, m| &acc + &m)
}
