//! CPTP maps as Kraus lists, their Choi matrices, and the standard families.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    choi_vec, hermitian_eig, sum_matrices, unvec, ChoiVector, ComplexMatrix, Keep,
};
use crate::scalar::Real;

/// A channel on a `dim`-dimensional system, given by Kraus operators with
/// `Σ K_i^dag K_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel<R> {
    dim: usize,
    kraus: Vec<ComplexMatrix<R>>,
}

/// Choi matrix `C = Σ_{m,m'} |m><m'| ⊗ C(|m><m'|)`, input factor first.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix<R> {
    dim_in: usize,
    dim_out: usize,
    matrix: ComplexMatrix<R>,
}

/// The channel families used throughout the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelKind<R> {
    Identity,
    /// `ρ -> U ρ U^dag`.
    Unitary(ComplexMatrix<R>),
    /// Fully depolarising, Kraus `{U_i / d}` over the Weyl basis.
    Depolarising,
    /// `q·id + (1 - q)·depolarising`.
    PartialDepolarising { q: R },
    /// Qubit `(1 - p) ρ + p σ_z ρ σ_z`.
    PhaseFlip { p: R },
    /// Qubit `(1 - p) ρ + p σ_x ρ σ_x`.
    BitFlip { p: R },
    /// `ρ -> σ` for a fixed density matrix `σ`.
    Constant(ComplexMatrix<R>),
}

/// Validates a Kraus list with the default tolerance.
pub fn validate_channel<R: Real>(kraus: Vec<ComplexMatrix<R>>) -> Result<Channel<R>> {
    Channel::with_tol(kraus, R::default_tol())
}

impl<R: Real> Channel<R> {
    pub fn new(kraus: Vec<ComplexMatrix<R>>) -> Result<Self> {
        validate_channel(kraus)
    }

    /// Checks squareness, a common dimension, and trace preservation, in that
    /// order.
    pub fn with_tol(kraus: Vec<ComplexMatrix<R>>, tol: R) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyKraus)?;
        let dim = first.require_square()?;
        for k in &kraus {
            let n = k.require_square()?;
            if n != dim {
                return Err(Error::dims(dim, n));
            }
        }
        let sum = sum_matrices(kraus.iter().map(|k| k.dagger() * k)).expect("non-empty");
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if dev > tol {
            return Err(Error::NotTracePreserving(dev.as_f64()));
        }
        Ok(Self { dim, kraus })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix<R>] {
        &self.kraus
    }

    pub fn kraus_count(&self) -> usize {
        self.kraus.len()
    }

    pub fn identity(d: usize) -> Self {
        Self {
            dim: d,
            kraus: vec![ComplexMatrix::identity(d)],
        }
    }

    pub fn depolarising(d: usize) -> Result<Self> {
        standard_channel(ChannelKind::Depolarising, d)
    }

    pub fn partial_depolarising(d: usize, q: R) -> Result<Self> {
        standard_channel(ChannelKind::PartialDepolarising { q }, d)
    }

    pub fn phase_flip(p: R) -> Result<Self> {
        standard_channel(ChannelKind::PhaseFlip { p }, 2)
    }

    pub fn bit_flip(p: R) -> Result<Self> {
        standard_channel(ChannelKind::BitFlip { p }, 2)
    }

    /// `ρ -> C(ρ)` for a validated density matrix.
    pub fn apply(&self, rho: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>> {
        rho.require_shape(self.dim, self.dim)?;
        rho.validate_density(R::default_tol())?;
        self.apply_operator(rho)
    }

    /// Linear extension `X -> Σ K_i X K_i^dag` to arbitrary square operators.
    pub fn apply_operator(&self, x: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>> {
        x.require_shape(self.dim, self.dim)?;
        Ok(sum_matrices(self.kraus.iter().map(|k| k.sandwich(x))).expect("non-empty"))
    }

    /// `C = Σ_i |K_i>><<K_i|`.
    pub fn choi(&self) -> ChoiMatrix<R> {
        let matrix = sum_matrices(self.kraus.iter().map(|k| choi_vec(k).projector()))
            .expect("non-empty")
            .hermitian_part();
        ChoiMatrix {
            dim_in: self.dim,
            dim_out: self.dim,
            matrix,
        }
    }

    /// Kraus remixing `K'_i = Σ_r u_ir M_r`.
    ///
    /// `u` must have orthonormal columns. When it has more columns than there
    /// are Kraus operators, the list is padded with zero operators first.
    pub fn remix(&self, u: &ComplexMatrix<R>) -> Result<Self> {
        let n = self.kraus.len();
        if u.cols() < n {
            return Err(Error::dims(format!("at least {n} columns"), u.cols()));
        }
        if u.rows() < u.cols() {
            return Err(Error::NotIsometry(f64::INFINITY));
        }
        let dev = u.isometry_deviation();
        if dev > R::default_tol() {
            return Err(Error::NotIsometry(dev.as_f64()));
        }
        let kraus = (0..u.rows())
            .map(|i| {
                let mut k = ComplexMatrix::zeros(self.dim, self.dim);
                for (r, m) in self.kraus.iter().enumerate() {
                    let w = u[(i, r)];
                    if !w.is_zero() {
                        k = &k + &m.scale(w);
                    }
                }
                k
            })
            .collect();
        Ok(Self {
            dim: self.dim,
            kraus,
        })
    }

    /// Sequential composition: `self` first, then `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.dim != next.dim {
            return Err(Error::dims(self.dim, next.dim));
        }
        let kraus = next
            .kraus
            .iter()
            .flat_map(|l| self.kraus.iter().map(move |k| l * k))
            .collect();
        Ok(Self {
            dim: self.dim,
            kraus,
        })
    }

    pub fn cast<S: Real>(&self) -> Channel<S> {
        Channel {
            dim: self.dim,
            kraus: self.kraus.iter().map(ComplexMatrix::cast).collect(),
        }
    }
}

impl<R: Real> ChoiMatrix<R> {
    /// Validates positivity and `Tr_out C = 1`.
    pub fn new(matrix: ComplexMatrix<R>, dim_in: usize, dim_out: usize) -> Result<Self> {
        Self::with_tol(matrix, dim_in, dim_out, R::default_tol())
    }

    pub fn with_tol(matrix: ComplexMatrix<R>, dim_in: usize, dim_out: usize, tol: R) -> Result<Self> {
        matrix.require_shape(dim_in * dim_out, dim_in * dim_out)?;
        let dev = matrix.hermitian_deviation();
        if dev > tol {
            return Err(Error::InvalidChoi(format!("not Hermitian ({:.3e})", dev.as_f64())));
        }
        let matrix = matrix.hermitian_part();
        let min = hermitian_eig(&matrix)?.min_value();
        if min < -tol {
            return Err(Error::InvalidChoi(format!(
                "not positive semidefinite (min eigenvalue {:.3e})",
                min.as_f64()
            )));
        }
        let marginal = matrix.partial_trace(dim_in, dim_out, Keep::First)?;
        let dev = marginal.max_abs_diff(&ComplexMatrix::identity(dim_in));
        if dev > tol {
            return Err(Error::InvalidChoi(format!(
                "output partial trace is not the identity ({:.3e})",
                dev.as_f64()
            )));
        }
        Ok(Self {
            dim_in,
            dim_out,
            matrix,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix<R> {
        &self.matrix
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// `C(ρ) = Tr_in[C (ρ^T ⊗ 1)]`.
    pub fn apply(&self, rho: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>> {
        rho.require_shape(self.dim_in, self.dim_in)?;
        let lifted = rho.transpose().kron(&ComplexMatrix::identity(self.dim_out));
        (&self.matrix * &lifted).partial_trace(self.dim_in, self.dim_out, Keep::Second)
    }
}

/// Canonical Kraus operators `K_k = unvec(√λ_k v_k)` from the eigenpairs of
/// `C` above `rank_tol · λ_max`.
pub fn canonical_kraus<R: Real>(choi: &ChoiMatrix<R>, rank_tol: R) -> Result<Channel<R>> {
    if choi.dim_in != choi.dim_out {
        return Err(Error::dims(choi.dim_in, choi.dim_out));
    }
    let eig = hermitian_eig(&choi.matrix)?;
    let cutoff = rank_tol * eig.max_value();
    let kraus: Vec<_> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > cutoff && l > R::zero())
        .map(|(k, &l)| {
            let s = l.sqrt();
            let amplitudes = eig.vector(k).into_iter().map(|z| z * s).collect();
            unvec(&ChoiVector {
                dim_in: choi.dim_in,
                dim_out: choi.dim_out,
                amplitudes,
            })
        })
        .collect();
    Channel::new(kraus)
}

/// Weyl-Heisenberg basis `U_(a,b) = X^a Z^b`, listed at index `a·d + b`.
///
/// `X|k> = |k+1 mod d>`, `Z|k> = ω^k |k>` with `ω = e^{2πi/d}`.
pub fn weyl_basis<R: Real>(d: usize) -> Vec<ComplexMatrix<R>> {
    let omega = |k: usize| {
        let angle = R::lit(2.0 * std::f64::consts::PI * (k % d) as f64 / d as f64);
        Complex::from_polar(R::one(), angle)
    };
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            // (X^a Z^b)|k> = ω^{bk} |k+a>
            out.push(ComplexMatrix::from_fn(d, d, |row, col| {
                if row == (col + a) % d {
                    omega(b * col)
                } else {
                    Complex::zero()
                }
            }));
        }
    }
    out
}

/// Builds a standard channel. `PhaseFlip` and `BitFlip` require `d == 2`.
pub fn standard_channel<R: Real>(kind: ChannelKind<R>, d: usize) -> Result<Channel<R>> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
        });
    }
    let check_prob = |name: &'static str, p: R| {
        if p >= R::zero() && p <= R::one() {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                name,
                value: p.as_f64(),
            })
        }
    };
    let dd = R::lit(d as f64);
    match kind {
        ChannelKind::Identity => Ok(Channel::identity(d)),
        ChannelKind::Unitary(u) => {
            u.require_shape(d, d)?;
            if !u.is_unitary(R::default_tol()) {
                return Err(Error::NotIsometry(u.isometry_deviation().as_f64()));
            }
            Channel::new(vec![u])
        }
        ChannelKind::Depolarising => Channel::new(
            weyl_basis::<R>(d)
                .into_iter()
                .map(|u| u.scale_real(R::one() / dd))
                .collect(),
        ),
        ChannelKind::PartialDepolarising { q } => {
            check_prob("q", q)?;
            // K_0 = sqrt(d²q + 1 - q)/d · 1, K_i = sqrt(1 - q)/d · U_i (U_0 = 1).
            let w0 = (dd * dd * q + R::one() - q).sqrt() / dd;
            let wi = (R::one() - q).sqrt() / dd;
            let kraus = weyl_basis::<R>(d)
                .into_iter()
                .enumerate()
                .map(|(i, u)| u.scale_real(if i == 0 { w0 } else { wi }))
                .collect();
            Channel::new(kraus)
        }
        ChannelKind::PhaseFlip { p } | ChannelKind::BitFlip { p } => {
            check_prob("p", p)?;
            if d != 2 {
                return Err(Error::dims(2, d));
            }
            let pauli = if matches!(kind, ChannelKind::PhaseFlip { .. }) {
                pauli_z()
            } else {
                pauli_x()
            };
            Channel::new(vec![
                ComplexMatrix::identity(2).scale_real((R::one() - p).sqrt()),
                pauli.scale_real(p.sqrt()),
            ])
        }
        ChannelKind::Constant(sigma) => {
            sigma.require_shape(d, d)?;
            sigma.validate_density(R::default_tol())?;
            let eig = hermitian_eig(&sigma)?;
            let mut kraus = Vec::new();
            for (j, &l) in eig.values.iter().enumerate() {
                if l <= R::zero() {
                    continue;
                }
                let v: Vec<_> = eig.vector(j).into_iter().map(|z| z * l.sqrt()).collect();
                for m in 0..d {
                    let mut e = vec![Complex::zero(); d];
                    e[m] = Complex::one();
                    kraus.push(ComplexMatrix::outer(&v, &e));
                }
            }
            Channel::new(kraus)
        }
    }
}

pub fn pauli_x<R: Real>() -> ComplexMatrix<R> {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
}

pub fn pauli_y<R: Real>() -> ComplexMatrix<R> {
    let i = Complex::new(R::zero(), R::one());
    ComplexMatrix::from_vec(2, 2, vec![Complex::zero(), -i, i, Complex::zero()]).expect("2x2")
}

pub fn pauli_z<R: Real>() -> ComplexMatrix<R> {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2")
}

/// `|Φ+><Φ+|` on `d ⊗ d`, normalized.
pub fn max_entangled<R: Real>(d: usize) -> ComplexMatrix<R> {
    let v = choi_vec(&ComplexMatrix::<R>::identity(d));
    v.projector().scale_real(R::one() / R::lit(d as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pseudoinverse;
    use crate::random::{random_channel, random_density, random_unitary};
    use crate::scalar::c;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    #[test]
    fn validate_examples() {
        assert!(Channel::<f64>::new(vec![M::identity(2)]).is_ok());
        let s = 1.0 / 2f64.sqrt();
        let ok = vec![pauli_x::<f64>().scale_real(s), pauli_z::<f64>().scale_real(s)];
        assert!(Channel::new(ok).is_ok());
        assert!(Channel::new(vec![pauli_x::<f64>()]).is_ok());
        let err = Channel::new(vec![pauli_x::<f64>().scale_real(0.5)]).unwrap_err();
        match err {
            Error::NotTracePreserving(dev) => assert!((dev - 0.75).abs() < 1e-12),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn validate_reports_distinct_errors() {
        assert_eq!(Channel::<f64>::new(vec![]).unwrap_err(), Error::EmptyKraus);
        assert!(matches!(
            Channel::new(vec![M::zeros(2, 3)]),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            Channel::new(vec![M::identity(2), M::zeros(3, 3)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn apply_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho: M = random_density(3, &mut rng);
        assert!(Channel::identity(3).apply(&rho).unwrap().approx_eq(&rho, 1e-15));

        let dep = Channel::<f64>::depolarising(2).unwrap();
        let out = dep.apply(&M::basis_projector(2, 0)).unwrap();
        assert!(out.approx_eq(&M::identity(2).scale_real(0.5), 1e-15));

        let plus = M::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let out = Channel::phase_flip(0.5).unwrap().apply(&plus).unwrap();
        assert!(out.approx_eq(&M::identity(2).scale_real(0.5), 1e-15));
    }

    #[test]
    fn apply_rejects_bad_input() {
        let ch = Channel::<f64>::identity(2);
        assert!(matches!(ch.apply(&M::identity(3)), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(ch.apply(&M::identity(2)), Err(Error::InvalidTrace(_))));
    }

    #[test]
    fn choi_examples() {
        for d in 2..5 {
            let id = Channel::<f64>::identity(d).choi();
            let one = choi_vec(&M::identity(d)).projector();
            assert!(id.matrix().approx_eq(&one, 1e-15));

            let n = Channel::<f64>::depolarising(d).unwrap().choi();
            let expect = M::identity(d * d).scale_real(1.0 / d as f64);
            assert!(n.matrix().approx_eq(&expect, 1e-14), "d={d}");
        }
        let p = 0.3;
        let z = Channel::<f64>::phase_flip(p).unwrap().choi();
        let expect = &choi_vec(&M::identity(2)).projector().scale_real(1.0 - p)
            + &choi_vec(&pauli_z::<f64>()).projector().scale_real(p);
        assert!(z.matrix().approx_eq(&expect, 1e-15));
    }

    #[test]
    fn choi_matrix_validation() {
        let bad = M::identity(4);
        assert!(matches!(ChoiMatrix::new(bad, 2, 2), Err(Error::InvalidChoi(_))));
        let neg = M::diag_real(&[1.5, 0.0, 0.0, -0.5]);
        assert!(matches!(ChoiMatrix::new(neg, 2, 2), Err(Error::InvalidChoi(_))));
        assert!(ChoiMatrix::new(M::identity(4).scale_real(0.5), 2, 2).is_ok());
    }

    #[test]
    fn canonical_kraus_examples() {
        let n = ChoiMatrix::new(M::identity(4).scale_real(0.5), 2, 2).unwrap();
        let ch = canonical_kraus(&n, 1e-12).unwrap();
        assert_eq!(ch.kraus_count(), 4);
        for (i, k) in ch.kraus().iter().enumerate() {
            assert!(((k.dagger() * k).trace().re - 0.5).abs() < 1e-14);
            for l in &ch.kraus()[i + 1..] {
                assert!(k.hs_inner(l).norm() < 1e-14);
            }
        }

        let id = Channel::<f64>::identity(3).choi();
        let ch = canonical_kraus(&id, 1e-12).unwrap();
        assert_eq!(ch.kraus_count(), 1);
        let k = &ch.kraus()[0];
        let phase = k[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-14);
        assert!(k.approx_eq(&M::identity(3).scale(phase), 1e-14));
    }

    #[test]
    fn canonical_kraus_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for t in 0..20 {
            let d = 2 + t % 2;
            let ch: Channel<f64> = random_channel(d, 1 + t % 4, &mut rng);
            let c = ch.choi();
            let back = canonical_kraus(&c, 1e-12).unwrap().choi();
            assert!(back.matrix().approx_eq(c.matrix(), 1e-12));
        }
    }

    #[test]
    fn remix_examples() {
        let p = 0.3;
        let ch = Channel::<f64>::phase_flip(p).unwrap();
        assert_eq!(ch.remix(&M::identity(2)).unwrap(), ch);

        let s = 1.0 / 2f64.sqrt();
        let h = M::from_real(2, 2, &[s, s, s, -s]).unwrap();
        let mixed = ch.remix(&h).unwrap();
        assert!(mixed.kraus()[0].max_abs_diff(&ch.kraus()[0]) > 0.1);
        assert!(mixed.choi().matrix().approx_eq(ch.choi().matrix(), 1e-12));

        let phase = M::identity(2).scale(Complex::from_polar(1.0, 0.7));
        let rotated = ch.remix(&phase).unwrap();
        assert!(rotated.kraus()[0].max_abs_diff(&ch.kraus()[0]) > 0.1);
        assert!(rotated.choi().matrix().approx_eq(ch.choi().matrix(), 1e-14));
    }

    #[test]
    fn remix_padding_and_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ch = Channel::<f64>::phase_flip(0.2).unwrap();
        let u: M = random_unitary(5, &mut rng);
        let padded = ch.remix(&u).unwrap();
        assert_eq!(padded.kraus_count(), 5);
        assert!(padded.choi().matrix().approx_eq(ch.choi().matrix(), 1e-12));

        let bad = M::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(ch.remix(&bad), Err(Error::NotIsometry(_))));
        assert!(ch.remix(&M::identity(1)).is_err());
    }

    #[test]
    fn choi_is_representation_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let ch: Channel<f64> = random_channel(2, 3, &mut rng);
            let u: M = random_unitary(3, &mut rng);
            let v = ch.remix(&u).unwrap();
            assert!(v.choi().matrix().approx_eq(ch.choi().matrix(), 1e-10));
        }
    }

    #[test]
    fn choi_reconstructs_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for t in 0..20 {
            let d = 2 + t % 3;
            let ch: Channel<f64> = random_channel(d, 2, &mut rng);
            let rho: M = random_density(d, &mut rng);
            let direct = ch.apply(&rho).unwrap();
            let via_choi = ch.choi().apply(&rho).unwrap();
            assert!(direct.approx_eq(&via_choi, 1e-10));
        }
    }

    #[test]
    fn kraus_in_choi_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let channels: Vec<Channel<f64>> = vec![
            Channel::phase_flip(0.4).unwrap(),
            Channel::identity(3),
            random_channel(3, 2, &mut rng),
        ];
        for ch in channels {
            let c = ch.choi();
            let proj = c.matrix() * &pseudoinverse(c.matrix(), 1e-12).unwrap();
            for k in ch.kraus() {
                let v = choi_vec(k).amplitudes;
                let pv = proj.apply(&v);
                let err: f64 = v.iter().zip(&pv).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                assert!(err < 1e-10);
            }
        }
    }

    #[test]
    fn library_channels_preserve_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let sigma: M = random_density(3, &mut rng);
        let u: M = random_unitary(3, &mut rng);
        let channels: Vec<Channel<f64>> = vec![
            Channel::depolarising(3).unwrap(),
            Channel::partial_depolarising(3, 0.4).unwrap(),
            standard_channel(ChannelKind::Constant(sigma.clone()), 3).unwrap(),
            standard_channel(ChannelKind::Unitary(u), 3).unwrap(),
            random_channel(3, 4, &mut rng),
        ];
        for ch in &channels {
            for _ in 0..10 {
                let rho: M = random_density(3, &mut rng);
                let out = ch.apply(&rho).unwrap();
                assert!((out.trace().re - 1.0).abs() < 1e-10);
                assert!(crate::linalg::hermitian_eig(&out).unwrap().min_value() >= -1e-10);
            }
        }
        let rho: M = random_density(3, &mut rng);
        assert!(channels[2].apply(&rho).unwrap().approx_eq(&sigma, 1e-12));
    }

    #[test]
    fn standard_channel_kraus_choices() {
        let dep = Channel::<f64>::depolarising(2).unwrap();
        let expect = [M::identity(2), pauli_z(), pauli_x(), &pauli_x::<f64>() * &pauli_z::<f64>()];
        for (k, u) in dep.kraus().iter().zip(&expect) {
            assert!(k.approx_eq(&u.scale_real(0.5), 1e-15));
        }
        // X Z = -i Y
        let xz = &pauli_x::<f64>() * &pauli_z::<f64>();
        assert!(xz.approx_eq(&pauli_y::<f64>().scale(c(0.0, -1.0)), 1e-15));

        let q1 = Channel::<f64>::partial_depolarising(3, 1.0).unwrap();
        assert!(q1.choi().matrix().approx_eq(Channel::identity(3).choi().matrix(), 1e-14));
        let p0 = Channel::<f64>::phase_flip(0.0).unwrap();
        assert!(p0.choi().matrix().approx_eq(Channel::identity(2).choi().matrix(), 1e-15));
    }

    #[test]
    fn standard_channel_range_errors() {
        assert!(matches!(Channel::<f64>::phase_flip(1.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(Channel::<f64>::partial_depolarising(2, -0.1), Err(Error::OutOfRange { .. })));
        assert!(standard_channel(ChannelKind::<f64>::PhaseFlip { p: 0.1 }, 3).is_err());
        assert!(standard_channel(ChannelKind::<f64>::Identity, 1).is_err());
        assert!(standard_channel(ChannelKind::Unitary(M::identity(2).scale_real(2.0)), 2).is_err());
        assert!(standard_channel(ChannelKind::Constant(M::identity(2)), 2).is_err());
    }

    #[test]
    fn weyl_basis_properties() {
        let w = weyl_basis::<f64>(2);
        let expect = [M::identity(2), pauli_z(), pauli_x(), &pauli_x::<f64>() * &pauli_z::<f64>()];
        for (a, b) in w.iter().zip(&expect) {
            assert!(a.approx_eq(b, 1e-15));
        }
        for d in [2, 3, 4] {
            let w = weyl_basis::<f64>(d);
            assert_eq!(w.len(), d * d);
            for (i, a) in w.iter().enumerate() {
                assert!(a.is_unitary(1e-14));
                for (j, b) in w.iter().enumerate() {
                    let ip = a.hs_inner(b);
                    let expect = if i == j { d as f64 } else { 0.0 };
                    assert!((ip - c(expect, 0.0)).norm() < 1e-13, "d={d} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn weyl_twirl_fully_depolarises() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for d in [2, 3] {
            let w = weyl_basis::<f64>(d);
            let rho: M = random_density(d, &mut rng);
            let avg = sum_matrices(w.iter().map(|u| u.sandwich(&rho)))
                .unwrap()
                .scale_real(1.0 / (d * d) as f64);
            assert!(avg.approx_eq(&M::identity(d).scale_real(1.0 / d as f64), 1e-14));
        }
    }

    #[test]
    fn composition_order() {
        let a = Channel::<f64>::new(vec![pauli_x()]).unwrap();
        let b = Channel::<f64>::new(vec![M::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()]).unwrap();
        let ab = a.then(&b).unwrap();
        assert!(ab.kraus()[0].approx_eq(&(&pauli_z::<f64>() * &pauli_x::<f64>()), 1e-15));
    }

    #[test]
    fn works_in_single_precision() {
        let ch = Channel::<f32>::depolarising(2).unwrap();
        let c = ch.choi();
        assert!(c.matrix().approx_eq(&ComplexMatrix::identity(4).scale_real(0.5), 1e-6));
        let back = canonical_kraus(&c, f32::rank_cutoff()).unwrap();
        assert_eq!(back.kraus_count(), 4);
    }
}
