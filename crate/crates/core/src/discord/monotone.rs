//! Monotonicity trials for `J` and `δ`, and the witness that `J` can grow
//! under incoherent operations that are not strictly incoherent.

use serde::Serialize;

use crate::channels::KrausChannel;
use crate::coherence::classify::{classify_channel, local_kraus, DEFAULT_TOL};
use crate::discord::measures::{basis_discord, check_basis, classical_correlations};
use crate::error::{Error, Result};
use crate::linalg::basis::Basis;
use crate::linalg::matrix::{ComplexMatrix, C64};
use crate::linalg::state::{BipartiteState, Side};

/// Slack for ensemble monotonicity.
pub const ENSEMBLE_SLACK: f64 = 1e-8;
/// Below this `|⟨k|E(|i⟩⟨j|)|k⟩|` is treated as zero.
pub const WITNESS_CUTOFF: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Quantity {
    #[serde(rename = "J")]
    ClassicalCorrelations,
    #[serde(rename = "delta")]
    Discord,
}

impl Quantity {
    pub fn evaluate(self, rho: &BipartiteState, b: &Basis) -> Result<f64> {
        match self {
            Quantity::ClassicalCorrelations => classical_correlations(rho, b),
            Quantity::Discord => Ok(basis_discord(rho, b)?.discord),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl TrialOutcome {
    pub fn new(lhs: f64, rhs: f64, slack: f64) -> Self {
        Self {
            lhs,
            rhs,
            pass: lhs <= rhs + slack,
        }
    }
}

fn check_channel(rho: &BipartiteState, e: &KrausChannel, b: &Basis) -> Result<()> {
    check_basis(rho, b)?;
    if e.dim_in() != rho.dim_a() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim_a(),
            found: e.dim_in(),
        });
    }
    e.require_trace_preserving()
}

/// `Σ_µ p_µ M(ρ^µ) ≤ M(ρ)`, with outcomes given by the Kraus operators of an
/// SI channel acting on A. Negligible outcomes are skipped.
pub fn ensemble_monotonicity_trial(
    quantity: Quantity,
    rho: &BipartiteState,
    e: &KrausChannel,
    b: &Basis,
) -> Result<TrialOutcome> {
    check_channel(rho, e, b)?;
    let report = classify_channel(e, b, None, DEFAULT_TOL)?;
    if !report.strictly_incoherent {
        return Err(Error::NotStrictlyIncoherent {
            violation: report.si_violation,
        });
    }
    let rhs = quantity.evaluate(rho, b)?;
    let mut lhs = 0.0;
    for mu in 0..e.len() {
        let (p, state) = e.local_outcome(mu, rho, Side::A)?;
        if let Some(state) = state {
            lhs += p * quantity.evaluate(&state, b)?;
        }
    }
    Ok(TrialOutcome::new(lhs, rhs, ENSEMBLE_SLACK))
}

/// `M(E_A(ρ)) ≤ M(ρ)` for the unselected channel output; no class check.
pub fn deterministic_monotonicity_trial(
    quantity: Quantity,
    rho: &BipartiteState,
    e: &KrausChannel,
    b: &Basis,
) -> Result<TrialOutcome> {
    check_channel(rho, e, b)?;
    let rhs = quantity.evaluate(rho, b)?;
    let lhs = quantity.evaluate(&e.local_apply(rho, Side::A)?, b)?;
    Ok(TrialOutcome::new(lhs, rhs, ENSEMBLE_SLACK))
}

#[derive(Clone, Debug, Serialize)]
pub struct JWitness {
    pub state: BipartiteState,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub phi: f64,
    /// `⟨k|E(|i⟩⟨j|)|k⟩`.
    pub tau: C64,
    pub j_before: f64,
    pub j_after: f64,
}

/// Builds a state with `J(B|A) = 0` whose classical correlations become
/// positive after `e` acts on A.
///
/// Scans the matrix units `|i⟩⟨j|`, `i < j`, for the largest population
/// `τ = ⟨k|E(|i⟩⟨j|)|k⟩` created from a coherence, takes `φ = arg τ` and
/// returns `½(|φ⟩⟨φ| ⊗ |0⟩⟨0| + ½(|i⟩⟨i| + |j⟩⟨j|) ⊗ |1⟩⟨1|)` with
/// `|φ⟩ = (|i⟩ + e^{iφ}|j⟩)/√2`.
pub fn j_increase_witness(e: &KrausChannel, b: &Basis) -> Result<JWitness> {
    let local = local_kraus(e, b)?;
    let d = b.dim();
    let mut best: Option<(usize, usize, usize, C64)> = None;
    for i in 0..d {
        for j in i + 1..d {
            let unit = ComplexMatrix::unit(d, i, j);
            let out: ComplexMatrix = local.iter().map(|k| k.conjugate(&unit)).sum();
            for k in 0..d {
                let t = out[(k, k)];
                if best.is_none_or(|(_, _, _, bt)| t.norm() > bt.norm()) {
                    best = Some((i, j, k, t));
                }
            }
        }
    }
    let (i, j, k, tau) = best.ok_or(Error::NoWitness)?;
    if tau.norm() < WITNESS_CUTOFF {
        return Err(Error::NoWitness);
    }
    let phi = tau.arg();

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut psi = vec![C64::new(0.0, 0.0); d];
    psi[i] = C64::new(h, 0.0);
    psi[j] = C64::from_polar(h, phi);
    let psi = b.unitary().apply_vector(&psi);
    let mixed = &b.projector(i).scale_real(0.25) + &b.projector(j).scale_real(0.25);
    let m = &ComplexMatrix::projector(&psi).scale_real(0.5).kron(&ComplexMatrix::unit(2, 0, 0))
        + &mixed.kron(&ComplexMatrix::unit(2, 1, 1));
    let state = BipartiteState::from_matrix_unchecked(d, 2, m);

    let j_before = classical_correlations(&state, b)?;
    let j_after = classical_correlations(&e.local_apply(&state, Side::A)?, b)?;
    Ok(JWitness {
        state,
        i,
        j,
        k,
        phi,
        tau,
        j_before,
        j_after,
    })
}
