//! Channel implementations and their transformation matrices.
//!
//! A Stinespring dilation `|ψ>|ε> -> Σ_i K_i|ψ>|i>` of a channel fixes, besides
//! the channel itself, the operator `T = Σ_i <ε|i> K_i`. Two implementations of
//! the same channel can differ in `T`, and coherent control of the channel is
//! sensitive to that difference. The set of reachable `T` is
//!
//! ```text
//! { T : |T>> ∈ range(C)  and  <<T|C⁺|T>> <= 1 }
//! ```
//!
//! for the channel's Choi matrix `C`; [`admissible`] tests it and [`realize`]
//! builds an implementation for any member.

use num_complex::Complex;
use num_traits::Zero;

use crate::channel::{canonical_kraus, weyl_basis, Channel};
use crate::error::{Error, Result};
use crate::linalg::{choi_vec, hermitian_eig, inner, vec_norm, ComplexMatrix};
use crate::scalar::{real, Real};

/// A channel together with the environment amplitudes `env_i = <i|ε>` of its
/// dilation. `Σ |env_i|² <= 1`; any remaining weight of `|ε>` lies outside
/// the span of the dilation basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelImplementation<R> {
    channel: Channel<R>,
    env: Vec<Complex<R>>,
}

/// The operator `T = Σ_i <ε|i> K_i` of an implementation.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformationMatrix<R>(ComplexMatrix<R>);

/// Outcome of the admissibility test together with both quantities it is
/// based on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility<R> {
    /// `|(1 - CC⁺)|T>>| / ||T>>|`, zero for `T = 0`.
    pub range_residual: R,
    /// `<<T|C⁺|T>>`.
    pub quadratic_form: R,
    pub admissible: bool,
}

/// Worked implementation families.
#[derive(Debug, Clone, PartialEq)]
pub enum ImplementationKind<R> {
    /// Kraus `{1}`, `<ε|0> = α`; gives `T = α·1`.
    Identity { alpha: Complex<R> },
    /// Kraus `{U}`, `<ε|0> = α`; gives `T = α·U`.
    Unitary { u: ComplexMatrix<R>, alpha: Complex<R> },
    /// Weyl Kraus `{U_i/d}`, `<ε|i> = Tr[U_i^dag T]`.
    Depolarising { t: ComplexMatrix<R> },
    /// Kraus of [`ChannelKind::PartialDepolarising`](crate::ChannelKind), with
    /// `<ε|0> = Tr[T]/sqrt(d²q + 1 - q)` and `<ε|i> = Tr[U_i^dag T]/sqrt(1 - q)`.
    PartialDepolarising { q: R, t: ComplexMatrix<R> },
    /// Kraus `{sqrt(1-p)·1, sqrt(p)·σ_z}`, `<ε|0> = α`, `<ε|1> = β`.
    PhaseFlip { p: R, alpha: Complex<R>, beta: Complex<R> },
    /// Kraus `{sqrt(1-p)·1, sqrt(p)·σ_x}`, `<ε|0> = α`, `<ε|1> = β`.
    BitFlip { p: R, alpha: Complex<R>, beta: Complex<R> },
}

impl<R: Real> TransformationMatrix<R> {
    pub fn new(m: ComplexMatrix<R>) -> Result<Self> {
        m.require_square()?;
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &ComplexMatrix<R> {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix<R> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }
}

impl<R: Real> ChannelImplementation<R> {
    pub fn new(channel: Channel<R>, env: Vec<Complex<R>>) -> Result<Self> {
        if env.len() != channel.kraus_count() {
            return Err(Error::dims(
                format!("{} environment amplitudes", channel.kraus_count()),
                env.len(),
            ));
        }
        let norm2 = env.iter().fold(R::zero(), |acc, z| acc + z.norm_sqr());
        if norm2 > R::one() + R::default_tol() {
            return Err(Error::EnvironmentNorm(norm2.as_f64()));
        }
        Ok(Self { channel, env })
    }

    /// Implementation whose environment starts in the first dilation state.
    pub fn first_kraus(channel: Channel<R>) -> Self {
        let mut env = vec![Complex::zero(); channel.kraus_count()];
        env[0] = real(R::one());
        Self { channel, env }
    }

    pub fn channel(&self) -> &Channel<R> {
        &self.channel
    }

    pub fn env(&self) -> &[Complex<R>] {
        &self.env
    }

    pub fn dim(&self) -> usize {
        self.channel.dim()
    }

    /// `T = Σ_i conj(env_i) K_i`.
    pub fn transformation_matrix(&self) -> TransformationMatrix<R> {
        let d = self.channel.dim();
        let mut t = ComplexMatrix::zeros(d, d);
        for (k, e) in self.channel.kraus().iter().zip(&self.env) {
            if !e.is_zero() {
                t = &t + &k.scale(e.conj());
            }
        }
        TransformationMatrix(t)
    }

    /// Remixes the Kraus operators by the isometry `u` and carries the
    /// environment along (`env -> u·env`), which leaves `T` unchanged.
    pub fn remix(&self, u: &ComplexMatrix<R>) -> Result<Self> {
        let channel = self.channel.remix(u)?;
        let mut padded = self.env.clone();
        padded.resize(u.cols(), Complex::zero());
        Ok(Self {
            channel,
            env: u.apply(&padded),
        })
    }

    pub fn cast<S: Real>(&self) -> ChannelImplementation<S> {
        ChannelImplementation {
            channel: self.channel.cast(),
            env: self
                .env
                .iter()
                .map(|z| Complex::new(S::lit(z.re.as_f64()), S::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

/// Admissibility with the default tolerances.
pub fn is_admissible<R: Real>(ch: &Channel<R>, t: &ComplexMatrix<R>) -> Result<Admissibility<R>> {
    admissible(ch, t, R::admissible_tol())
}

/// Tests `|T>> ∈ range(C)` (relative residual `<= tol`) and
/// `<<T|C⁺|T>> <= 1 + tol`.
pub fn admissible<R: Real>(ch: &Channel<R>, t: &ComplexMatrix<R>, tol: R) -> Result<Admissibility<R>> {
    t.require_shape(ch.dim(), ch.dim())?;
    let choi = ch.choi();
    let eig = hermitian_eig(choi.matrix())?;
    let v = choi_vec(t).amplitudes;
    let cutoff = R::rank_cutoff() * eig.max_value();

    let mut quadratic_form = R::zero();
    let mut projected = vec![Complex::zero(); v.len()];
    for (k, &l) in eig.values.iter().enumerate() {
        if l <= cutoff || l <= R::zero() {
            continue;
        }
        let vk = eig.vector(k);
        let overlap = inner(&vk, &v);
        quadratic_form = quadratic_form + overlap.norm_sqr() / l;
        for (p, x) in projected.iter_mut().zip(&vk) {
            *p = *p + *x * overlap;
        }
    }
    let norm = vec_norm(&v);
    let residual: Vec<_> = v.iter().zip(&projected).map(|(a, b)| a - b).collect();
    let range_residual = if norm > R::zero() {
        vec_norm(&residual) / norm
    } else {
        R::zero()
    };
    Ok(Admissibility {
        range_residual,
        quadratic_form,
        admissible: range_residual <= tol && quadratic_form <= R::one() + tol,
    })
}

/// Constructs an implementation with transformation matrix `t` over the
/// canonical Kraus operators `C_k` of `ch`: `<ε|k> = <<C_k|T>> / <<C_k|C_k>>`.
pub fn realize<R: Real>(ch: &Channel<R>, t: &ComplexMatrix<R>) -> Result<ChannelImplementation<R>> {
    let verdict = is_admissible(ch, t)?;
    if !verdict.admissible {
        return Err(Error::Inadmissible {
            range_residual: verdict.range_residual.as_f64(),
            quadratic_form: verdict.quadratic_form.as_f64(),
        });
    }
    let canonical = canonical_kraus(&ch.choi(), R::rank_cutoff())?;
    let tv = choi_vec(t);
    let env = canonical
        .kraus()
        .iter()
        .map(|k| {
            let kv = choi_vec(k);
            let eps = kv.inner(&tv) / kv.norm_sqr();
            eps.conj()
        })
        .collect::<Vec<_>>();
    // The quadratic form may exceed 1 by the admissibility slack; rescale so the
    // environment stays a valid (sub)normalized state.
    let norm2 = env.iter().fold(R::zero(), |acc, z| acc + z.norm_sqr());
    let env = if norm2 > R::one() {
        let s = R::one() / norm2.sqrt();
        env.into_iter().map(|z| z * s).collect()
    } else {
        env
    };
    ChannelImplementation::new(canonical, env)
}

/// Builds one of the worked implementation families and checks that it
/// reproduces the requested transformation matrix.
pub fn standard_implementation<R: Real>(
    kind: ImplementationKind<R>,
    d: usize,
) -> Result<ChannelImplementation<R>> {
    use crate::channel::{standard_channel, ChannelKind};

    let dd = R::lit(d as f64);
    let (channel, env, target) = match kind {
        ImplementationKind::Identity { alpha } => (
            Channel::identity(d),
            vec![alpha.conj()],
            None,
        ),
        ImplementationKind::Unitary { u, alpha } => (
            standard_channel(ChannelKind::Unitary(u), d)?,
            vec![alpha.conj()],
            None,
        ),
        ImplementationKind::Depolarising { t } => {
            t.require_shape(d, d)?;
            let env = weyl_basis::<R>(d)
                .iter()
                .map(|u| u.hs_inner(&t).conj())
                .collect();
            (Channel::depolarising(d)?, env, Some(t))
        }
        ImplementationKind::PartialDepolarising { q, t } => {
            t.require_shape(d, d)?;
            let channel = Channel::partial_depolarising(d, q)?;
            let w0 = (dd * dd * q + R::one() - q).sqrt();
            let wi = (R::one() - q).sqrt();
            let env = weyl_basis::<R>(d)
                .iter()
                .enumerate()
                .map(|(i, u)| {
                    let (ov, w) = if i == 0 { (t.trace(), w0) } else { (u.hs_inner(&t), wi) };
                    if w > R::zero() {
                        (ov / w).conj()
                    } else {
                        Complex::zero()
                    }
                })
                .collect();
            (channel, env, Some(t))
        }
        ImplementationKind::PhaseFlip { p, alpha, beta } => (
            Channel::phase_flip(p)?,
            vec![alpha.conj(), beta.conj()],
            None,
        ),
        ImplementationKind::BitFlip { p, alpha, beta } => (
            Channel::bit_flip(p)?,
            vec![alpha.conj(), beta.conj()],
            None,
        ),
    };
    if channel.dim() != d {
        return Err(Error::dims(d, channel.dim()));
    }
    let norm2 = env.iter().fold(R::zero(), |acc, z| acc + z.norm_sqr());
    if norm2 > R::one() + R::admissible_tol() {
        return Err(Error::EnvironmentNorm(norm2.as_f64()));
    }
    let imp = ChannelImplementation::new(channel, env)?;
    if let Some(t) = target {
        let got = imp.transformation_matrix();
        let err = got.matrix().max_abs_diff(&t);
        if err > R::admissible_tol() * t.max_abs().max(R::one()) {
            let verdict = is_admissible(imp.channel(), &t)?;
            return Err(Error::Inadmissible {
                range_residual: verdict.range_residual.as_f64(),
                quadratic_form: verdict.quadratic_form.as_f64(),
            });
        }
    }
    Ok(imp)
}
