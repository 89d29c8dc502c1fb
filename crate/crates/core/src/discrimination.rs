//! Telling apart two implementations of the same channel by coherently
//! controlling them against a fixed reference arm.
//!
//! With arm 0 fixed to `(C0, T0)` and arm 1 holding either `T1` or `T1'`, the
//! two joint outputs differ only in their off-diagonal blocks, by
//! `a b* T0 ρ τ^dag` with `τ = T1 - T1'`. Their trace distance is therefore
//! `|a| |b| |τ ρ T0^dag|_1`, bounded above by `|τ|_∞ / 2` for `|+>` control.

use num_complex::Complex;
use num_traits::Zero;

use crate::control::{controlled_output, ControlState};
use crate::error::{Error, Result};
use crate::implementation::ChannelImplementation;
use crate::linalg::{hermitian_eig, spectral_norm, trace_norm, ComplexMatrix};
use crate::scalar::{real, Real};

/// Eigenvalues of `τ^dag τ` closer than this (relative to the largest) are
/// treated as degenerate by [`optimal_input`].
pub const DEGENERACY_TOL: f64 = 1e-10;

/// `|ρ - σ|_1 / 2`.
pub fn trace_distance<R: Real>(rho: &ComplexMatrix<R>, sigma: &ComplexMatrix<R>) -> Result<R> {
    if rho.shape() != sigma.shape() {
        return Err(Error::dims(
            format!("{}x{}", rho.rows(), rho.cols()),
            format!("{}x{}", sigma.rows(), sigma.cols()),
        ));
    }
    rho.validate_density(R::default_tol())?;
    sigma.validate_density(R::default_tol())?;
    let half = R::lit(0.5);
    Ok((trace_norm(&(rho - sigma)) * half).min(R::one()))
}

/// A fixed arm plus two candidate implementations of one channel.
#[derive(Debug, Clone)]
pub struct DiscriminationInstance<R> {
    fixed: ChannelImplementation<R>,
    candidate_a: ChannelImplementation<R>,
    candidate_b: ChannelImplementation<R>,
}

impl<R: Real> DiscriminationInstance<R> {
    pub fn new(
        fixed: ChannelImplementation<R>,
        candidate_a: ChannelImplementation<R>,
        candidate_b: ChannelImplementation<R>,
    ) -> Result<Self> {
        let d = fixed.dim();
        for cand in [&candidate_a, &candidate_b] {
            if cand.dim() != d {
                return Err(Error::dims(d, cand.dim()));
            }
        }
        let ca = candidate_a.channel().choi();
        let cb = candidate_b.channel().choi();
        let dev = ca.matrix().max_abs_diff(cb.matrix());
        if dev > R::admissible_tol() {
            return Err(Error::InvalidChoi(format!(
                "candidates implement different channels (Choi deviation {:.3e})",
                dev.as_f64()
            )));
        }
        Ok(Self {
            fixed,
            candidate_a,
            candidate_b,
        })
    }

    pub fn fixed(&self) -> &ChannelImplementation<R> {
        &self.fixed
    }

    pub fn candidates(&self) -> (&ChannelImplementation<R>, &ChannelImplementation<R>) {
        (&self.candidate_a, &self.candidate_b)
    }

    pub fn dim(&self) -> usize {
        self.fixed.dim()
    }

    /// `τ = T1 - T1'`.
    pub fn tau(&self) -> ComplexMatrix<R> {
        let ta = self.candidate_a.transformation_matrix().into_inner();
        let tb = self.candidate_b.transformation_matrix().into_inner();
        &ta - &tb
    }

    /// `(1/2)|τ|_∞`.
    pub fn diamond_bound(&self) -> R {
        spectral_norm(&self.tau()) * R::lit(0.5)
    }
}

/// Output trace distance computed two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputDistance<R> {
    /// Trace distance of the two joint outputs.
    pub direct: R,
    /// `|a| |b| |τ ρ T0^dag|_1`.
    pub closed_form: R,
}

impl<R: Real> OutputDistance<R> {
    pub fn value(&self) -> R {
        self.direct
    }

    pub fn deviation(&self) -> R {
        (self.direct - self.closed_form).abs()
    }
}

pub fn output_distance<R: Real>(
    inst: &DiscriminationInstance<R>,
    control: ControlState<R>,
    rho: &ComplexMatrix<R>,
) -> Result<OutputDistance<R>> {
    let out_a = controlled_output(&inst.fixed, &inst.candidate_a, control, rho)?;
    let out_b = controlled_output(&inst.fixed, &inst.candidate_b, control, rho)?;
    let direct = trace_distance(out_a.matrix(), out_b.matrix())?;
    let t0 = inst.fixed.transformation_matrix().into_inner();
    let weight = control.a().norm() * control.b().norm();
    let closed_form = trace_norm(&(&(&inst.tau() * rho) * &t0.dagger())) * weight;
    Ok(OutputDistance { direct, closed_form })
}

/// `(1/2)|T1 - T1'|_∞`.
pub fn diamond_bound<R: Real>(t1: &ComplexMatrix<R>, t1p: &ComplexMatrix<R>) -> Result<R> {
    if t1.shape() != t1p.shape() {
        return Err(Error::dims(
            format!("{}x{}", t1.rows(), t1.cols()),
            format!("{}x{}", t1p.rows(), t1p.cols()),
        ));
    }
    Ok(spectral_norm(&(t1 - t1p)) * R::lit(0.5))
}

/// Unit vector maximizing `<ψ|τ^dag τ|ψ>` for `τ = t1 - t1p`.
///
/// A degenerate top eigenspace is resolved deterministically: take the
/// lowest basis vector `|k>` with a nonzero projection onto it and return that
/// projection, normalized and rotated so component `k` is real positive. Among
/// unit vectors of the eigenspace this one has the largest first nonzero
/// component.
pub fn optimal_input<R: Real>(t1: &ComplexMatrix<R>, t1p: &ComplexMatrix<R>) -> Result<Vec<Complex<R>>> {
    if t1.shape() != t1p.shape() {
        return Err(Error::dims(
            format!("{}x{}", t1.rows(), t1.cols()),
            format!("{}x{}", t1p.rows(), t1p.cols()),
        ));
    }
    let tau = t1 - t1p;
    if tau.max_abs() <= R::epsilon() {
        return Err(Error::ZeroDifference);
    }
    let gram = (&tau.dagger() * &tau).hermitian_part();
    let eig = hermitian_eig(&gram)?;
    let top = eig.values[0];
    let tie = R::lit(DEGENERACY_TOL).max(R::epsilon() * R::lit(1e3)) * top.max(R::one());
    let span: Vec<Vec<Complex<R>>> = eig
        .values
        .iter()
        .enumerate()
        .take_while(|(_, &l)| top - l <= tie)
        .map(|(k, _)| eig.vector(k))
        .collect();

    let n = gram.rows();
    let cutoff = R::lit(DEGENERACY_TOL).max(R::epsilon() * R::lit(1e3));
    for k in 0..n {
        // Projection of |k> onto the span: Σ_v v conj(v_k).
        let mut proj = vec![Complex::<R>::zero(); n];
        for v in &span {
            let coeff = v[k].conj();
            for (p, x) in proj.iter_mut().zip(v) {
                *p = *p + *x * coeff;
            }
        }
        let norm = proj.iter().fold(R::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if norm > cutoff {
            let phase = proj[k] / real(proj[k].norm());
            return Ok(proj.into_iter().map(|z| z / phase / real(norm)).collect());
        }
    }
    unreachable!("the eigenspace projections of the basis vectors cannot all vanish")
}

/// Helstrom success probability `(1 + D) / 2`.
pub fn success_probability<R: Real>(distance: R) -> Result<R> {
    let slack = R::default_tol();
    if !(distance >= -slack && distance <= R::one() + slack) {
        return Err(Error::OutOfRange {
            name: "distance",
            value: distance.as_f64(),
        });
    }
    let d = distance.max(R::zero()).min(R::one());
    Ok((R::one() + d) * R::lit(0.5))
}

/// `1/sqrt(d)`: the largest diamond bound between two implementations of the
/// fully depolarising channel.
pub fn max_depolarising_distance<R: Real>(d: usize) -> Result<R> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
        });
    }
    Ok(R::one() / R::lit(d as f64).sqrt())
}
