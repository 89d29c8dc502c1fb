use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar backing every complex amplitude in the crate.
///
/// Implemented for `f32` and `f64`. The associated constants carry the
/// precision-dependent defaults: validation tolerance, the relative cutoff
/// below which an eigenvalue counts as zero, and the slack used by the
/// transformation-matrix admissibility test.
pub trait Real:
    Float + FloatConst + FromPrimitive + Default + Debug + Display + Send + Sync + 'static
{
    const DEFAULT_TOL: f64;
    const RANK_CUTOFF: f64;
    const ADMISSIBLE_TOL: f64;

    /// Converts an `f64` literal. Every finite `f64` is representable (with
    /// rounding) in the supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    #[inline]
    fn default_tol() -> Self {
        Self::lit(Self::DEFAULT_TOL)
    }

    #[inline]
    fn rank_cutoff() -> Self {
        Self::lit(Self::RANK_CUTOFF)
    }

    #[inline]
    fn admissible_tol() -> Self {
        Self::lit(Self::ADMISSIBLE_TOL)
    }
}

impl Real for f64 {
    const DEFAULT_TOL: f64 = 1e-9;
    const RANK_CUTOFF: f64 = 1e-12;
    const ADMISSIBLE_TOL: f64 = 1e-8;
}

impl Real for f32 {
    const DEFAULT_TOL: f64 = 1e-4;
    const RANK_CUTOFF: f64 = 1e-6;
    const ADMISSIBLE_TOL: f64 = 1e-4;
}

#[cfg(test)]
pub(crate) fn c<R: Real>(re: f64, im: f64) -> Complex<R> {
    Complex::new(R::lit(re), R::lit(im))
}

#[inline]
pub(crate) fn real<R: Real>(re: R) -> Complex<R> {
    Complex::new(re, R::zero())
}
