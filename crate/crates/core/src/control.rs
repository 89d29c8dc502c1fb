//! Coherent control of two channel implementations, its classical-control
//! baseline, and the quantum switch.
//!
//! The joint output lives on `control ⊗ target` with the control qubit as the
//! first (slowest) factor, so it splits into four `d x d` blocks indexed by the
//! control basis states. For a control state `a|0> + b|1>`:
//!
//! ```text
//! coherent control   [[ |a|² C0(ρ),      a b* T0 ρ T1^dag ],
//!                     [ a* b T1 ρ T0^dag, |b|² C1(ρ)       ]]
//!
//! quantum switch     [[ |a|² C1∘C0(ρ),                a b* Σ L_j K_i ρ L_j^dag K_i^dag ],
//!                     [ a* b Σ K_i L_j ρ K_i^dag L_j^dag, |b|² C0∘C1(ρ)                ]]
//! ```
//!
//! The switch depends only on the two channels; coherent control also
//! depends on the transformation matrices of their implementations.

use num_complex::Complex;
use num_traits::Zero;

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::implementation::ChannelImplementation;
use crate::linalg::{hermitian_eig, sum_matrices, ComplexMatrix, Keep};
use crate::scalar::{real, Real};

/// Pure control-qubit state `a|0> + b|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlState<R> {
    a: Complex<R>,
    b: Complex<R>,
}

impl<R: Real> ControlState<R> {
    pub fn new(a: Complex<R>, b: Complex<R>) -> Result<Self> {
        let n = a.norm_sqr() + b.norm_sqr();
        if (n - R::one()).abs() > R::default_tol() {
            return Err(Error::ControlNotNormalized(n.as_f64()));
        }
        Ok(Self { a, b })
    }

    /// `|+> = (|0> + |1>)/sqrt(2)`.
    pub fn plus() -> Self {
        let s = real(R::FRAC_1_SQRT_2());
        Self { a: s, b: s }
    }

    pub fn zero() -> Self {
        Self {
            a: real(R::one()),
            b: Complex::zero(),
        }
    }

    pub fn one() -> Self {
        Self {
            a: Complex::zero(),
            b: real(R::one()),
        }
    }

    pub fn a(&self) -> Complex<R> {
        self.a
    }

    pub fn b(&self) -> Complex<R> {
        self.b
    }

    /// Block weights `(|a|², |b|², a b*)`.
    fn weights(&self) -> (R, R, Complex<R>) {
        (self.a.norm_sqr(), self.b.norm_sqr(), self.a * self.b.conj())
    }
}

/// Joint control-target state on `C^2 ⊗ C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlledOutput<R> {
    dim: usize,
    matrix: ComplexMatrix<R>,
}

impl<R: Real> ControlledOutput<R> {
    /// Wraps a `2d x 2d` matrix.
    pub fn from_matrix(matrix: ComplexMatrix<R>) -> Result<Self> {
        let n = matrix.require_square()?;
        if n % 2 != 0 || n == 0 {
            return Err(Error::dims("even side", n));
        }
        Ok(Self { dim: n / 2, matrix })
    }

    fn from_blocks(
        d00: ComplexMatrix<R>,
        d01: ComplexMatrix<R>,
        d11: ComplexMatrix<R>,
    ) -> Self {
        let d10 = d01.dagger();
        Self {
            dim: d00.rows(),
            matrix: ComplexMatrix::from_blocks(&d00, &d01, &d10, &d11),
        }
    }

    pub fn target_dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix<R> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<R> {
        self.matrix
    }

    pub fn diag0(&self) -> ComplexMatrix<R> {
        self.matrix.block(0, 0, self.dim)
    }

    pub fn diag1(&self) -> ComplexMatrix<R> {
        self.matrix.block(1, 1, self.dim)
    }

    pub fn offdiag01(&self) -> ComplexMatrix<R> {
        self.matrix.block(0, 1, self.dim)
    }

    pub fn offdiag10(&self) -> ComplexMatrix<R> {
        self.matrix.block(1, 0, self.dim)
    }

    /// Reduced state of the control qubit.
    pub fn control_marginal(&self) -> ComplexMatrix<R> {
        self.matrix
            .partial_trace(2, self.dim, Keep::First)
            .expect("2d side")
    }

    /// Reduced state of the target.
    pub fn target_marginal(&self) -> ComplexMatrix<R> {
        self.matrix
            .partial_trace(2, self.dim, Keep::Second)
            .expect("2d side")
    }

    /// The same state after the control decoheres in the computational basis.
    pub fn decohered(&self) -> Self {
        let z = ComplexMatrix::zeros(self.dim, self.dim);
        Self::from_blocks(self.diag0(), z, self.diag1())
    }

    pub fn validate(&self, tol: R) -> Result<()> {
        self.matrix.validate_density(tol)
    }

    pub fn min_eigenvalue(&self) -> R {
        hermitian_eig(&self.matrix.hermitian_part())
            .map(|e| e.min_value())
            .unwrap_or_else(|_| R::neg_infinity())
    }
}

/// A linear map from target operators to (generally larger) output operators.
pub trait GlobalMap<R: Real> {
    fn input_dim(&self) -> usize;

    fn output_dim(&self) -> usize;

    /// Linear action on an arbitrary `input_dim x input_dim` operator.
    fn apply_operator(&self, x: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>>;

    /// Action on a validated density matrix.
    fn apply(&self, rho: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>> {
        rho.require_shape(self.input_dim(), self.input_dim())?;
        rho.validate_density(R::default_tol())?;
        self.apply_operator(rho)
    }
}

impl<R: Real> GlobalMap<R> for Channel<R> {
    fn input_dim(&self) -> usize {
        self.dim()
    }

    fn output_dim(&self) -> usize {
        self.dim()
    }

    fn apply_operator(&self, x: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>> {
        Channel::apply_operator(self, x)
    }
}

impl<R: Real, F> GlobalMap<R> for (usize, usize, F)
where
    F: Fn(&ComplexMatrix<R>) -> Result<ComplexMatrix<R>>,
{
    fn input_dim(&self) -> usize {
        self.0
    }

    fn output_dim(&self) -> usize {
        self.1
    }

    fn apply_operator(&self, x: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>> {
        (self.2)(x)
    }
}

/// Coherent control between two implementations with a fixed control state.
#[derive(Debug, Clone)]
pub struct CoherentControl<R> {
    arm0: ChannelImplementation<R>,
    arm1: ChannelImplementation<R>,
    control: ControlState<R>,
    t0: ComplexMatrix<R>,
    t1: ComplexMatrix<R>,
}

impl<R: Real> CoherentControl<R> {
    pub fn new(
        arm0: ChannelImplementation<R>,
        arm1: ChannelImplementation<R>,
        control: ControlState<R>,
    ) -> Result<Self> {
        if arm0.dim() != arm1.dim() {
            return Err(Error::dims(arm0.dim(), arm1.dim()));
        }
        let t0 = arm0.transformation_matrix().into_inner();
        let t1 = arm1.transformation_matrix().into_inner();
        Ok(Self {
            arm0,
            arm1,
            control,
            t0,
            t1,
        })
    }

    pub fn arms(&self) -> (&ChannelImplementation<R>, &ChannelImplementation<R>) {
        (&self.arm0, &self.arm1)
    }

    pub fn control(&self) -> ControlState<R> {
        self.control
    }

    pub fn output(&self, rho: &ComplexMatrix<R>) -> Result<ControlledOutput<R>> {
        let m = self.apply(rho)?;
        Ok(ControlledOutput {
            dim: self.arm0.dim(),
            matrix: m,
        })
    }
}

impl<R: Real> GlobalMap<R> for CoherentControl<R> {
    fn input_dim(&self) -> usize {
        self.arm0.dim()
    }

    fn output_dim(&self) -> usize {
        2 * self.arm0.dim()
    }

    fn apply_operator(&self, x: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>> {
        let (w0, w1, w01) = self.control.weights();
        let d00 = self.arm0.channel().apply_operator(x)?.scale_real(w0);
        let d11 = self.arm1.channel().apply_operator(x)?.scale_real(w1);
        let d01 = (&(&self.t0 * x) * &self.t1.dagger()).scale(w01);
        let d10 = (&(&self.t1 * x) * &self.t0.dagger()).scale(w01.conj());
        Ok(ComplexMatrix::from_blocks(&d00, &d01, &d10, &d11))
    }
}

/// Classical mixture of the two arms, flagged by the control.
#[derive(Debug, Clone)]
pub struct ClassicalControl<R> {
    arm0: Channel<R>,
    arm1: Channel<R>,
    weights: (R, R),
}

impl<R: Real> ClassicalControl<R> {
    pub fn new(arm0: Channel<R>, arm1: Channel<R>, weights: (R, R)) -> Result<Self> {
        if arm0.dim() != arm1.dim() {
            return Err(Error::dims(arm0.dim(), arm1.dim()));
        }
        let (w0, w1) = weights;
        if w0 < R::zero() || w1 < R::zero() || (w0 + w1 - R::one()).abs() > R::default_tol() {
            return Err(Error::InvalidWeights);
        }
        Ok(Self { arm0, arm1, weights })
    }
}

impl<R: Real> GlobalMap<R> for ClassicalControl<R> {
    fn input_dim(&self) -> usize {
        self.arm0.dim()
    }

    fn output_dim(&self) -> usize {
        2 * self.arm0.dim()
    }

    fn apply_operator(&self, x: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>> {
        let d = self.arm0.dim();
        let z = ComplexMatrix::zeros(d, d);
        let d00 = self.arm0.apply_operator(x)?.scale_real(self.weights.0);
        let d11 = self.arm1.apply_operator(x)?.scale_real(self.weights.1);
        Ok(ComplexMatrix::from_blocks(&d00, &z, &z, &d11))
    }
}

/// The quantum switch of two channels.
#[derive(Debug, Clone)]
pub struct QuantumSwitch<R> {
    ch0: Channel<R>,
    ch1: Channel<R>,
    control: ControlState<R>,
}

impl<R: Real> QuantumSwitch<R> {
    pub fn new(ch0: Channel<R>, ch1: Channel<R>, control: ControlState<R>) -> Result<Self> {
        if ch0.dim() != ch1.dim() {
            return Err(Error::dims(ch0.dim(), ch1.dim()));
        }
        Ok(Self { ch0, ch1, control })
    }

    pub fn output(&self, rho: &ComplexMatrix<R>) -> Result<ControlledOutput<R>> {
        let m = self.apply(rho)?;
        Ok(ControlledOutput {
            dim: self.ch0.dim(),
            matrix: m,
        })
    }
}

impl<R: Real> GlobalMap<R> for QuantumSwitch<R> {
    fn input_dim(&self) -> usize {
        self.ch0.dim()
    }

    fn output_dim(&self) -> usize {
        2 * self.ch0.dim()
    }

    fn apply_operator(&self, x: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>> {
        x.require_shape(self.ch0.dim(), self.ch0.dim())?;
        let (w0, w1, w01) = self.control.weights();
        let ks = self.ch0.kraus();
        let ls = self.ch1.kraus();
        let mut d00 = Vec::with_capacity(ks.len() * ls.len());
        let mut d11 = Vec::with_capacity(ks.len() * ls.len());
        let mut d01 = Vec::with_capacity(ks.len() * ls.len());
        let mut d10 = Vec::with_capacity(ks.len() * ls.len());
        for k in ks {
            for l in ls {
                let lk = l * k;
                let kl = k * l;
                d00.push(lk.sandwich(x));
                d11.push(kl.sandwich(x));
                // (L_j K_i) x (K_i L_j)^dag = L_j K_i x L_j^dag K_i^dag
                d01.push(&(&lk * x) * &kl.dagger());
                d10.push(&(&kl * x) * &lk.dagger());
            }
        }
        let sum = |v: Vec<ComplexMatrix<R>>| sum_matrices(v).expect("non-empty Kraus lists");
        Ok(ComplexMatrix::from_blocks(
            &sum(d00).scale_real(w0),
            &sum(d01).scale(w01),
            &sum(d10).scale(w01.conj()),
            &sum(d11).scale_real(w1),
        ))
    }
}

/// Closed-form output of coherent control.
pub fn controlled_output<R: Real>(
    i0: &ChannelImplementation<R>,
    i1: &ChannelImplementation<R>,
    control: ControlState<R>,
    rho: &ComplexMatrix<R>,
) -> Result<ControlledOutput<R>> {
    CoherentControl::new(i0.clone(), i1.clone(), control)?.output(rho)
}

/// Coherent control computed from an explicit purification: the joint pure
/// state of control, target and both environments is built for each
/// eigenvector of `rho`, the environments are traced out, and the results
/// are mixed by the eigenvalues.
///
/// Each environment register has `kraus_count + 1` levels. Level `i + 1`
/// holds the dilation state `|i>` and level 0 carries whatever part of the
/// initial environment state lies outside their span, so the untouched arm
/// keeps its environment exactly in `|ε>`.
pub fn stinespring_oracle<R: Real>(
    i0: &ChannelImplementation<R>,
    i1: &ChannelImplementation<R>,
    control: ControlState<R>,
    rho: &ComplexMatrix<R>,
) -> Result<ControlledOutput<R>> {
    let d = i0.dim();
    if i1.dim() != d {
        return Err(Error::dims(d, i1.dim()));
    }
    rho.require_shape(d, d)?;
    rho.validate_density(R::default_tol())?;

    let eps0 = embedded_env(i0.env());
    let eps1 = embedded_env(i1.env());
    let (e0, e1) = (eps0.len(), eps1.len());
    let env_dim = e0 * e1;
    let sys_dim = 2 * d;

    let eig = hermitian_eig(rho)?;
    let mut out = ComplexMatrix::zeros(sys_dim, sys_dim);
    for (k, &weight) in eig.values.iter().enumerate() {
        if weight <= R::zero() {
            continue;
        }
        let psi = eig.vector(k);
        let mut joint = vec![Complex::<R>::zero(); sys_dim * env_dim];
        let index = |c: usize, t: usize, x0: usize, x1: usize| ((c * d + t) * e0 + x0) * e1 + x1;

        for (i, kraus) in i0.channel().kraus().iter().enumerate() {
            let phi = kraus.apply(&psi);
            for (t, &amp) in phi.iter().enumerate() {
                for (x1, &env) in eps1.iter().enumerate() {
                    let k = index(0, t, i + 1, x1);
                    joint[k] = joint[k] + control.a * amp * env;
                }
            }
        }
        for (j, kraus) in i1.channel().kraus().iter().enumerate() {
            let phi = kraus.apply(&psi);
            for (t, &amp) in phi.iter().enumerate() {
                for (x0, &env) in eps0.iter().enumerate() {
                    let k = index(1, t, x0, j + 1);
                    joint[k] = joint[k] + control.b * amp * env;
                }
            }
        }

        let projector = ComplexMatrix::outer(&joint, &joint);
        let reduced = projector.partial_trace(sys_dim, env_dim, Keep::First)?;
        out = &out + &reduced.scale_real(weight);
    }
    Ok(ControlledOutput { dim: d, matrix: out })
}

/// Environment state as a vector over `kraus_count + 1` levels.
fn embedded_env<R: Real>(env: &[Complex<R>]) -> Vec<Complex<R>> {
    let norm2 = env.iter().fold(R::zero(), |acc, z| acc + z.norm_sqr());
    let rest = (R::one() - norm2).max(R::zero()).sqrt();
    std::iter::once(real(rest)).chain(env.iter().copied()).collect()
}

/// Block-diagonal output `w0 |0><0| ⊗ C0(ρ) + w1 |1><1| ⊗ C1(ρ)`.
pub fn classical_control<R: Real>(
    i0: &ChannelImplementation<R>,
    i1: &ChannelImplementation<R>,
    weights: (R, R),
    rho: &ComplexMatrix<R>,
) -> Result<ControlledOutput<R>> {
    let map = ClassicalControl::new(i0.channel().clone(), i1.channel().clone(), weights)?;
    Ok(ControlledOutput {
        dim: i0.dim(),
        matrix: map.apply(rho)?,
    })
}

pub fn switch_output<R: Real>(
    ch0: &Channel<R>,
    ch1: &Channel<R>,
    control: ControlState<R>,
    rho: &ComplexMatrix<R>,
) -> Result<ControlledOutput<R>> {
    QuantumSwitch::new(ch0.clone(), ch1.clone(), control)?.output(rho)
}
