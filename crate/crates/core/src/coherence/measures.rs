//! Single-system coherence measures.

use serde::Serialize;

use crate::coherence::classify::dephase;
use crate::error::Result;
use crate::linalg::basis::Basis;
use crate::linalg::eig::{eig_hermitian, matrix_function, MatrixFunction};
use crate::linalg::info::{entropy, fidelity, trace_distance, Metric};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::random::Sampler;
use crate::linalg::state::DensityMatrix;
use crate::optim::NelderMead;

/// Number of random starts for the fidelity-of-coherence search, in
/// addition to the start at `Φ(ρ)`.
pub const FIDELITY_RESTARTS: usize = 20;
const FIDELITY_IMPROVEMENT_TOL: f64 = 1e-9;

/// `S(Φ(ρ)) − S(ρ)` in bits.
pub fn rel_ent_coherence(rho: &DensityMatrix, b: &Basis) -> Result<f64> {
    let dephased = dephase(rho, b)?;
    Ok((entropy(&dephased) - entropy(rho)).max(0.0))
}

/// `C'_D(ρ) = D(ρ, Φ(ρ))`.
pub fn dephased_distance_coherence(rho: &DensityMatrix, b: &Basis, metric: Metric) -> Result<f64> {
    let dephased = dephase(rho, b)?;
    Ok(metric.eval_matrices(rho.matrix(), dephased.matrix()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoherenceMeasures {
    /// Relative entropy of coherence.
    #[serde(rename = "C")]
    pub relative_entropy: f64,
    /// `½‖ρ − Φ(ρ)‖₁`.
    #[serde(rename = "C_tr")]
    pub dephased_trace: f64,
    /// `1 − F(ρ, Φ(ρ))`.
    #[serde(rename = "C_fid")]
    pub dephased_fidelity: f64,
    /// Fidelity of coherence `min_σ 1 − F(ρ, σ)` over diagonal `σ`; an upper
    /// bound on the true minimum.
    #[serde(rename = "C_f")]
    pub fidelity_of_coherence: f64,
}

pub fn coherence_measures(rho: &DensityMatrix, b: &Basis, seed: u64) -> Result<CoherenceMeasures> {
    let dephased = dephase(rho, b)?;
    let relative_entropy = (entropy(&dephased) - entropy(rho)).max(0.0);
    let dephased_trace = trace_distance(rho, &dephased);
    let dephased_fidelity = (1.0 - fidelity(rho, &dephased)).max(0.0);
    let fidelity_of_coherence = fidelity_of_coherence(rho, b, seed)?.min(dephased_fidelity);
    Ok(CoherenceMeasures {
        relative_entropy,
        dephased_trace,
        dephased_fidelity,
        fidelity_of_coherence,
    })
}

/// `F(ρ, diag(q))` with `√ρ` precomputed, `q` in basis coordinates.
fn fidelity_with_diagonal(root_local: &ComplexMatrix, q: &[f64]) -> f64 {
    let sigma = ComplexMatrix::from_real_diag(q);
    let m = root_local.matmul(&sigma).matmul(root_local).hermitian_part();
    let spec = eig_hermitian(&m).expect("Hermitian by construction");
    spec.eigenvalues
        .iter()
        .map(|&l| if l > 1e-15 { l.sqrt() } else { 0.0 })
        .sum()
}

fn weights(x: &[f64]) -> Vec<f64> {
    let total: f64 = x.iter().map(|v| v * v).sum();
    if total == 0.0 {
        return vec![1.0 / x.len() as f64; x.len()];
    }
    x.iter().map(|v| v * v / total).collect()
}

/// `min_σ 1 − F(ρ, σ)` over states diagonal in `b`.
///
/// The simplex is parametrised as `q_i = x_i² / |x|²` and searched by simplex
/// descent from `Φ(ρ)` and from [`FIDELITY_RESTARTS`] seeded random points;
/// each descent is restarted in place until it improves by less than 1e-9.
pub fn fidelity_of_coherence(rho: &DensityMatrix, b: &Basis, seed: u64) -> Result<f64> {
    let dephased = dephase(rho, b)?;
    let d = rho.dim();
    let root_local = b.to_basis(&matrix_function(rho.matrix(), MatrixFunction::Sqrt)?);
    let objective = |x: &[f64]| 1.0 - fidelity_with_diagonal(&root_local, &weights(x));
    let nm = NelderMead {
        max_iters: 400 * d,
        initial_step: 0.2,
        ftol: 1e-13,
    };

    let p: Vec<f64> = b
        .to_basis(dephased.matrix())
        .diagonal()
        .iter()
        .map(|c| c.re.max(0.0).sqrt())
        .collect();
    let mut sampler = Sampler::new(seed);
    let mut starts = vec![p];
    for _ in 0..FIDELITY_RESTARTS {
        starts.push((0..d).map(|_| sampler.uniform_in(0.05, 1.0)).collect());
    }

    let mut best = f64::INFINITY;
    for x0 in starts {
        let mut x = x0;
        let mut value = objective(&x);
        loop {
            let m = nm.minimize(objective, &x);
            let improved = value - m.value;
            if m.value < value {
                x = m.x;
                value = m.value;
            }
            if improved < FIDELITY_IMPROVEMENT_TOL {
                break;
            }
        }
        best = best.min(value);
    }
    Ok(best.max(0.0))
}
