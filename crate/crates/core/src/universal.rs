//! Channels that are strictly incoherent in every basis.
//!
//! The depolarizing family `pρ + (1−p)I/d` admits the Kraus operators
//! `κ_kl L_kl` built from the Weyl operators, each a phased permutation in the
//! computational basis and therefore SI there; conjugating by any unitary
//! gives SI Kraus operators in any other basis. Conversely only depolarizing
//! channels pass the SI conditions in every basis. [`every_basis_falsifier`]
//! samples bases as a randomized check and [`is_depolarizing`] gives the exact
//! finite test.

use serde::Serialize;

use crate::channels::{ChoiMatrix, KrausChannel};
use crate::coherence::classify::{dephasing_commutator_local, incoherent_output_deviation_local};
use crate::error::{Error, Result};
use crate::linalg::basis::Basis;
use crate::linalg::eig::{eig_hermitian, matrix_function, MatrixFunction};
use crate::linalg::matrix::{ComplexMatrix, C64, ZERO};
use crate::linalg::random::Sampler;

/// Slack on the endpoints of the completely positive range.
pub const RANGE_SLACK: f64 = 1e-12;

fn omega(d: usize, power: usize) -> C64 {
    let angle = 2.0 * std::f64::consts::PI * ((power % d) as f64) / d as f64;
    C64::from_polar(1.0, angle)
}

/// `L_kl = Σ_j ω^{jk} |j⊕l⟩⟨j|` with `ω = e^{2πi/d}`.
pub fn weyl_operator(k: usize, l: usize, d: usize) -> Result<ComplexMatrix> {
    if k >= d || l >= d {
        return Err(Error::IndexOutOfRange { k, l, d });
    }
    let mut m = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        m[((j + l) % d, j)] = omega(d, j * k);
    }
    Ok(m)
}

/// `|α_kl⟩ = Σ_j ω^{jk} |j⟩|j⊕l⟩ / √d`, ordered with `k` major.
pub fn bell_basis(d: usize) -> Vec<Vec<C64>> {
    let s = 1.0 / (d as f64).sqrt();
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            let mut v = vec![ZERO; d * d];
            for j in 0..d {
                v[j * d + (j + l) % d] = omega(d, j * k) * s;
            }
            out.push(v);
        }
    }
    out
}

/// `−1/(d²−1) ≤ p ≤ 1`.
pub fn p_range(d: usize) -> (f64, f64) {
    let d2 = (d * d) as f64;
    (-1.0 / (d2 - 1.0), 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DepolarizingParams {
    pub d: usize,
    pub p: f64,
}

impl DepolarizingParams {
    pub fn new(d: usize, p: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Invalid(format!("depolarizing channel needs d >= 2, got {d}")));
        }
        let (lo, hi) = p_range(d);
        if !(lo - RANGE_SLACK..=hi + RANGE_SLACK).contains(&p) {
            return Err(Error::OutOfRange { value: p, lo, hi });
        }
        Ok(Self { d, p })
    }

    /// Eigenvalue of the Choi matrix on `|α₀₀⟩`.
    pub fn choi_top(&self) -> f64 {
        let d2 = (self.d * self.d) as f64;
        (1.0 + (d2 - 1.0) * self.p) / d2
    }

    /// The remaining `d²−1` Choi eigenvalues.
    pub fn choi_rest(&self) -> f64 {
        (1.0 - self.p) / (self.d * self.d) as f64
    }
}

/// Weyl operators with their depolarizing weights.
#[derive(Clone, Debug)]
pub struct WeylSet {
    pub d: usize,
    /// `(k, l, L_kl)` with `k` major.
    pub operators: Vec<(usize, usize, ComplexMatrix)>,
    /// `κ_kl`, in the same order.
    pub weights: Vec<f64>,
}

impl WeylSet {
    pub fn new(params: DepolarizingParams) -> Self {
        let d = params.d;
        let top = params.choi_top().max(0.0).sqrt();
        let rest = params.choi_rest().max(0.0).sqrt();
        let mut operators = Vec::with_capacity(d * d);
        let mut weights = Vec::with_capacity(d * d);
        for k in 0..d {
            for l in 0..d {
                operators.push((k, l, weyl_operator(k, l, d).expect("indices in range")));
                weights.push(if k == 0 && l == 0 { top } else { rest });
            }
        }
        Self { d, operators, weights }
    }

    pub fn kraus(&self) -> Vec<ComplexMatrix> {
        self.operators
            .iter()
            .zip(&self.weights)
            .map(|((_, _, l), &w)| l.scale_real(w))
            .collect()
    }
}

/// `ρ ↦ pρ + (1−p)I/d` with Kraus operators `κ_kl U L_kl U†` for the basis
/// unitary `U`; zero-weight operators are kept so the pattern is fixed.
pub fn depolarizing_channel(d: usize, p: f64, b: &Basis) -> Result<KrausChannel> {
    if b.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: b.dim(),
        });
    }
    let set = WeylSet::new(DepolarizingParams::new(d, p)?);
    let kraus = set.kraus().iter().map(|k| b.from_basis(k)).collect();
    KrausChannel::new(d, d, kraus)
}

/// `p|α₀₀⟩⟨α₀₀| + (1−p)I/d²` for any real `p`; a channel's Choi matrix only
/// inside [`p_range`].
pub fn depolarizing_choi(d: usize, p: f64) -> ChoiMatrix {
    let alpha = &bell_basis(d)[0];
    let matrix = &ComplexMatrix::projector(alpha).scale_real(p)
        + &ComplexMatrix::identity(d * d).scale_real((1.0 - p) / (d * d) as f64);
    ChoiMatrix {
        dim_in: d,
        dim_out: d,
        matrix,
    }
}

/// `ρ ↦ p UρU† + (1−p)I/d`.
pub fn isotropic_channel(u: &ComplexMatrix, p: f64) -> Result<KrausChannel> {
    let d = u.rows();
    KrausChannel::unitary(u.clone())?.then(&depolarizing_channel(d, p, &Basis::computational(d))?)
}

/// Fits the Choi matrix to `p|α₀₀⟩⟨α₀₀| + (1−p)I/d²`.
pub fn is_depolarizing(e: &KrausChannel, tol: f64) -> Option<f64> {
    if !e.is_square() {
        return None;
    }
    let d = e.dim_in();
    let choi = e.choi().matrix;
    let alpha = &bell_basis(d)[0];
    let a: f64 = (0..d * d)
        .flat_map(|r| (0..d * d).map(move |c| (r, c)))
        .map(|(r, c)| (alpha[r].conj() * choi[(r, c)] * alpha[c]).re)
        .sum();
    let d2 = (d * d) as f64;
    let p = (d2 * a - 1.0) / (d2 - 1.0);
    let c = (1.0 - p) / d2;
    let model = &ComplexMatrix::projector(alpha).scale_real(p)
        + &ComplexMatrix::identity(d * d).scale_real(c);
    (choi.max_abs_diff(&model) < tol).then_some(p)
}

/// `‖E(I/d) − I/d‖_max < tol`.
pub fn is_unital(e: &KrausChannel, tol: f64) -> bool {
    if !e.is_square() {
        return false;
    }
    let d = e.dim_in();
    let mixed = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
    match e.apply_matrix(&mixed) {
        Ok(out) => out.max_abs_diff(&mixed) < tol,
        Err(_) => false,
    }
}

/// Samples `n_bases` Haar-random bases (trial `i` drawn from its own stream)
/// and returns the first in which `e` either creates coherence from a basis
/// state or fails to commute with dephasing.
pub fn every_basis_falsifier(e: &KrausChannel, n_bases: usize, seed: u64, tol: f64) -> Option<Basis> {
    if !e.is_square() {
        return Some(Basis::computational(e.dim_in()));
    }
    let d = e.dim_in();
    (0..n_bases).find_map(|i| {
        let b = Sampler::for_trial(seed, i as u64).basis(d);
        let local: Vec<ComplexMatrix> = e.kraus().iter().map(|k| b.to_basis(k)).collect();
        let violated = incoherent_output_deviation_local(&local) > tol
            || dephasing_commutator_local(&local) > tol;
        violated.then_some(b)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IsotropicDecomposition {
    /// Phase fixed so that the first nonzero entry (row-major) is positive real.
    pub unitary: ComplexMatrix,
    pub p: f64,
}

/// `u` with its global phase fixed: the first entry (row-major) of modulus
/// above `1e-8` is made positive real.
pub fn canonical_phase(u: &ComplexMatrix) -> ComplexMatrix {
    let first = u
        .as_slice()
        .iter()
        .find(|z| z.norm() > 1e-8)
        .copied()
        .unwrap_or(C64::new(1.0, 0.0));
    u.scale(first.conj() / first.norm())
}

/// Writes `e` as `p U·U† + (1−p)I/d` when its Choi spectrum is one eigenvalue
/// plus a `(d²−1)`-fold one and the reconstruction matches on all matrix
/// units. Antiunitary isotropic channels are not recognised.
pub fn isotropic_decompose(e: &KrausChannel, tol: f64) -> Option<IsotropicDecomposition> {
    if !e.is_square() || !e.is_trace_preserving() {
        return None;
    }
    let d = e.dim_in();
    let n = d * d;
    let spec = eig_hermitian(&e.choi().matrix).ok()?;
    let ev = &spec.eigenvalues;
    let flat = |r: std::ops::Range<usize>| ev[r.clone()].iter().all(|&x| (x - ev[r.start]).abs() < tol);
    let single = if flat(1..n) {
        0
    } else if flat(0..n - 1) {
        n - 1
    } else {
        return None;
    };
    let d2 = n as f64;
    let p = (d2 * ev[single] - 1.0) / (d2 - 1.0);
    let unitary = if p.abs() < tol {
        ComplexMatrix::identity(d)
    } else {
        let v = spec.eigenvector(single);
        let m = ComplexMatrix::from_fn(d, d, |a, i| v[a * d + i]);
        let gram = m.adjoint().matmul(&m).hermitian_part();
        let inv_sqrt = matrix_function(&gram, MatrixFunction::InvSqrt).ok()?;
        canonical_phase(&m.matmul(&inv_sqrt))
    };
    if unitary.unitarity_deviation() > tol.max(1e-10) {
        return None;
    }
    for i in 0..d {
        for j in 0..d {
            let x = ComplexMatrix::unit(d, i, j);
            let mut model = unitary.conjugate(&x).scale_real(p);
            if i == j {
                model = &model + &ComplexMatrix::identity(d).scale_real((1.0 - p) / d as f64);
            }
            if e.apply_matrix(&x).ok()?.max_abs_diff(&model) >= tol {
                return None;
            }
        }
    }
    Some(IsotropicDecomposition { unitary, p })
}
