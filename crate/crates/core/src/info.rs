//! Entropies and the capacity lower bounds built from them.
//!
//! All entropies are in bits.

use num_complex::Complex;

use crate::control::GlobalMap;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, sum_matrices, ComplexMatrix, Keep};
use crate::scalar::Real;

/// Eigenvalues in `(-NEG_CLAMP, 0)` are treated as round-off and set to zero.
pub const NEG_CLAMP: f64 = 1e-12;

fn xlog2x<R: Real>(x: R) -> R {
    if x <= R::zero() {
        R::zero()
    } else {
        x * x.log2()
    }
}

/// Von Neumann entropy `-Σ λ log2 λ`.
pub fn entropy<R: Real>(rho: &ComplexMatrix<R>) -> Result<R> {
    rho.require_square()?;
    let tr = rho.trace();
    if (tr.re - R::one()).abs() > R::default_tol() || tr.im.abs() > R::default_tol() {
        return Err(Error::InvalidTrace(tr.re.as_f64()));
    }
    let eig = hermitian_eig(rho)?;
    // Clamp only noise at the working precision.
    let clamp = R::lit(NEG_CLAMP).max(R::epsilon() * R::lit(64.0));
    let mut h = R::zero();
    for &l in &eig.values {
        if l < -clamp {
            return Err(Error::NotPositive(l.as_f64()));
        }
        h = h - xlog2x(l);
    }
    Ok(h.max(R::zero()))
}

/// `H2(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy<R: Real>(p: R) -> Result<R> {
    if !(R::zero()..=R::one()).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p.as_f64(),
        });
    }
    Ok(-xlog2x(p) - xlog2x(R::one() - p))
}

/// Weighted list of input states.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble<R> {
    items: Vec<(R, ComplexMatrix<R>)>,
}

impl<R: Real> Ensemble<R> {
    pub fn new(items: Vec<(R, ComplexMatrix<R>)>) -> Result<Self> {
        let Some((_, first)) = items.first() else {
            return Err(Error::InvalidEnsemble("no states".into()));
        };
        let d = first.rows();
        let mut total = R::zero();
        for (k, (p, rho)) in items.iter().enumerate() {
            if *p < R::zero() || !p.is_finite() {
                return Err(Error::InvalidEnsemble(format!("probability {k} is {p}")));
            }
            if rho.shape() != (d, d) {
                return Err(Error::dims(format!("{d}x{d}"), format!("{}x{}", rho.rows(), rho.cols())));
            }
            rho.validate_density(R::default_tol())?;
            total = total + *p;
        }
        if (total - R::one()).abs() > R::default_tol() {
            return Err(Error::InvalidEnsemble(format!("probabilities sum to {total}")));
        }
        Ok(Self { items })
    }

    pub fn items(&self) -> &[(R, ComplexMatrix<R>)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.items[0].1.rows()
    }

    pub fn probabilities(&self) -> Vec<R> {
        self.items.iter().map(|(p, _)| *p).collect()
    }
}

/// Mutual information `I(A;B)` of `Σ_a p_a |a><a| ⊗ map(ρ_a)`.
///
/// Uses the classical-quantum structure: `H(A) = H(p)` and
/// `H(AB) = H(p) + Σ p_a H(map(ρ_a))`, so the value reduces to
/// `H(Σ p_a map(ρ_a)) - Σ p_a H(map(ρ_a))`.
pub fn holevo_lower_bound<R: Real, M: GlobalMap<R> + ?Sized>(map: &M, ensemble: &Ensemble<R>) -> Result<R> {
    if ensemble.dim() != map.input_dim() {
        return Err(Error::dims(map.input_dim(), ensemble.dim()));
    }
    let outputs = ensemble
        .items()
        .iter()
        .map(|(_, rho)| map.apply(rho))
        .collect::<Result<Vec<_>>>()?;
    let ps = ensemble.probabilities();
    holevo_from_outputs(&ps, &outputs)
}

/// `H(Σ p_a σ_a) - Σ p_a H(σ_a)` for precomputed output states.
pub fn holevo_from_outputs<R: Real>(ps: &[R], outputs: &[ComplexMatrix<R>]) -> Result<R> {
    let mut conditional = R::zero();
    for (p, out) in ps.iter().zip(outputs) {
        if *p > R::zero() {
            conditional = conditional + *p * entropy(out)?;
        }
    }
    let average = sum_matrices(ps.iter().zip(outputs).map(|(p, out)| out.scale_real(*p)))
        .ok_or_else(|| Error::InvalidEnsemble("no states".into()))?;
    Ok(entropy(&average)? - conditional)
}

/// The classical-quantum joint state `Σ_a p_a |a><a| ⊗ map(ρ_a)` itself.
pub fn cq_state<R: Real, M: GlobalMap<R> + ?Sized>(map: &M, ensemble: &Ensemble<R>) -> Result<ComplexMatrix<R>> {
    let n = ensemble.len();
    let mut blocks = Vec::with_capacity(n);
    for (a, (p, rho)) in ensemble.items().iter().enumerate() {
        let flag = ComplexMatrix::basis_projector(n, a);
        blocks.push(flag.kron(&map.apply(rho)?.scale_real(*p)));
    }
    Ok(sum_matrices(blocks).expect("non-empty ensemble"))
}

/// Mutual information `H(A) + H(B) - H(AB)` of a bipartite state.
pub fn mutual_information<R: Real>(state: &ComplexMatrix<R>, dim_a: usize, dim_b: usize) -> Result<R> {
    let ha = entropy(&state.partial_trace(dim_a, dim_b, Keep::First)?)?;
    let hb = entropy(&state.partial_trace(dim_a, dim_b, Keep::Second)?)?;
    Ok(ha + hb - entropy(state)?)
}

/// `(id ⊗ map)(ν0)` for `ν0` on reference ⊗ input.
pub fn extend_with_reference<R: Real, M: GlobalMap<R> + ?Sized>(
    map: &M,
    nu0: &ComplexMatrix<R>,
) -> Result<(usize, ComplexMatrix<R>)> {
    let n = nu0.require_square()?;
    let d_in = map.input_dim();
    if n % d_in != 0 {
        return Err(Error::dims(format!("multiple of {d_in}"), n));
    }
    let d_ref = n / d_in;
    let d_out = map.output_dim();
    let mut out = ComplexMatrix::zeros(d_ref * d_out, d_ref * d_out);
    for m in 0..d_ref {
        for k in 0..d_ref {
            let block = ComplexMatrix::from_fn(d_in, d_in, |i, j| nu0[(m * d_in + i, k * d_in + j)]);
            let image = map.apply_operator(&block)?;
            for i in 0..d_out {
                for j in 0..d_out {
                    out[(m * d_out + i, k * d_out + j)] = image[(i, j)];
                }
            }
        }
    }
    Ok((d_ref, out))
}

/// Coherent information `H(B) - H(AB)` of `ν = (id ⊗ map)(ν0)`, the
/// reference system being the first tensor factor of `ν0`.
pub fn coherent_info_bound<R: Real, M: GlobalMap<R> + ?Sized>(map: &M, nu0: &ComplexMatrix<R>) -> Result<R> {
    nu0.validate_density(R::default_tol())?;
    let (d_ref, nu) = extend_with_reference(map, nu0)?;
    let hb = entropy(&nu.partial_trace(d_ref, map.output_dim(), Keep::Second)?)?;
    Ok(hb - entropy(&nu)?)
}

/// `-3/8 - (5/8) log2(5/8)`: Holevo information of the switch of two qubit
/// depolarising channels.
pub fn switch_holevo_qubit<R: Real>() -> R {
    let five_eighths = R::lit(0.625);
    -R::lit(0.375) - five_eighths * five_eighths.log2()
}

/// `(1/d) log2(5/4)`: Holevo bound for coherent control of two depolarising
/// channels with `T0 = T1 = |0><0|/sqrt(d)`.
pub fn cc_depolarising_holevo_bound<R: Real>(d: usize) -> Result<R> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
        });
    }
    Ok(R::lit(1.25).log2() / R::lit(d as f64))
}

/// `p - H2(p) + H2((1-p)/2)`: coherent information of the controlled
/// phase-flip / bit-flip pair with transformation matrices `sqrt(p) σz`,
/// `sqrt(p) σx` and a maximally entangled input.
pub fn cc_dephasing_bound<R: Real>(p: R) -> Result<R> {
    let two = R::lit(2.0);
    Ok(p - binary_entropy(p)? + binary_entropy((R::one() - p) / two)?)
}

/// `|ψ> = cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>` as a density matrix.
pub fn bloch_state<R: Real>(theta: R, phi: R) -> ComplexMatrix<R> {
    let two = R::lit(2.0);
    let psi = [
        Complex::new((theta / two).cos(), R::zero()),
        Complex::from_polar((theta / two).sin(), phi),
    ];
    ComplexMatrix::outer(&psi, &psi)
}

/// Grid over binary pure-state qubit ensembles `{p: |0>, 1-p: |ψ(θ, φ)>}`.
///
/// The first state is pinned to `|0>`, which loses nothing for maps that are
/// covariant under target unitaries (such as anything built from fully
/// depolarising channels). `θ` runs over `[0, π]` and `φ` over `[0, 2π)` in
/// steps of `π / angle_divisions`; `p` over `[0, 1]` in steps of
/// `1 / prob_divisions`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitGrid {
    pub angle_divisions: usize,
    pub prob_divisions: usize,
}

impl Default for QubitGrid {
    fn default() -> Self {
        Self {
            angle_divisions: 60,
            prob_divisions: 20,
        }
    }
}

impl QubitGrid {
    pub fn theta_count(&self) -> usize {
        self.angle_divisions + 1
    }

    pub fn phi_count(&self) -> usize {
        2 * self.angle_divisions
    }

    pub fn point_count(&self) -> usize {
        self.theta_count() * self.phi_count() * (self.prob_divisions + 1)
    }
}

/// Best grid point found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMaximum<R> {
    pub value: R,
    pub p: R,
    pub theta: R,
    pub phi: R,
}

impl<R: Real> GridMaximum<R> {
    /// The larger of two maxima; ties keep `self`, so reductions are
    /// order-stable when folded left to right.
    pub fn max(self, other: Self) -> Self {
        if other.value > self.value {
            other
        } else {
            self
        }
    }
}

/// Scans every `(φ, p)` for one `θ` row of the grid.
pub fn qubit_holevo_grid_row<R: Real, M: GlobalMap<R> + ?Sized>(
    map: &M,
    grid: &QubitGrid,
    theta_index: usize,
) -> Result<GridMaximum<R>> {
    let step = R::PI() / R::lit(grid.angle_divisions as f64);
    let theta = step * R::lit(theta_index as f64);
    let out0 = map.apply(&ComplexMatrix::basis_projector(2, 0))?;
    let h0 = entropy(&out0)?;
    let mut best = GridMaximum {
        value: R::neg_infinity(),
        p: R::zero(),
        theta,
        phi: R::zero(),
    };
    for k in 0..grid.phi_count() {
        let phi = step * R::lit(k as f64);
        let out1 = map.apply(&bloch_state(theta, phi))?;
        let h1 = entropy(&out1)?;
        for m in 0..=grid.prob_divisions {
            let p = R::lit(m as f64 / grid.prob_divisions as f64);
            let mix = &out0.scale_real(p) + &out1.scale_real(R::one() - p);
            let value = entropy(&mix)? - p * h0 - (R::one() - p) * h1;
            best = best.max(GridMaximum { value, p, theta, phi });
        }
    }
    Ok(best)
}

/// Maximum Holevo information over the grid (sequential).
pub fn qubit_holevo_grid_search<R: Real, M: GlobalMap<R> + ?Sized>(map: &M, grid: &QubitGrid) -> Result<GridMaximum<R>> {
    if map.input_dim() != 2 {
        return Err(Error::dims(2, map.input_dim()));
    }
    let mut best = qubit_holevo_grid_row(map, grid, 0)?;
    for t in 1..grid.theta_count() {
        best = best.max(qubit_holevo_grid_row(map, grid, t)?);
    }
    Ok(best)
}
