//! Entropies, relative entropy and state distances. Logarithms are base 2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::eig::{eig_hermitian, matrix_function, MatrixFunction, SUPPORT_CUTOFF};
use crate::linalg::matrix::{inner, ComplexMatrix};
use crate::linalg::state::DensityMatrix;

/// Kernel overlap above which the relative entropy is infinite.
pub const KERNEL_OVERLAP_TOL: f64 = 1e-10;

/// `−Σ λ log₂ λ`, with `0 log 0 = 0`.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_matrix(rho.matrix())
}

pub(crate) fn entropy_of_matrix(m: &ComplexMatrix) -> f64 {
    let spec = eig_hermitian(m).expect("density matrices are Hermitian");
    shannon_entropy(&spec.eigenvalues)
}

/// `S(ρ‖σ) = tr ρ(log₂ρ − log₂σ)`, or `+∞` when the support of `ρ` is not
/// contained in the support of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    relative_entropy_of_matrices(rho.matrix(), sigma.matrix())
}

pub(crate) fn relative_entropy_of_matrices(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    let spec = eig_hermitian(sigma).expect("density matrices are Hermitian");
    let mut cross = 0.0;
    for (k, &l) in spec.eigenvalues.iter().enumerate() {
        let v = spec.eigenvector(k);
        let weight = inner(&v, &rho.apply_vector(&v)).re;
        if l > SUPPORT_CUTOFF {
            cross += weight * l.log2();
        } else if weight > KERNEL_OVERLAP_TOL {
            return f64::INFINITY;
        }
    }
    (-entropy_of_matrix(rho) - cross).max(0.0)
}

/// Trace norm of a Hermitian matrix, `Σ |λ|`.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    let spec = eig_hermitian(m).expect("trace norm of a Hermitian matrix");
    spec.eigenvalues.iter().map(|l| l.abs()).sum()
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    0.5 * trace_norm(&(rho.matrix() - sigma.matrix()))
}

/// `F(ρ, σ) = tr √(√ρ σ √ρ)`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    fidelity_of_matrices(rho.matrix(), sigma.matrix())
}

pub(crate) fn fidelity_of_matrices(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    let root = matrix_function(rho, MatrixFunction::Sqrt).expect("PSD input");
    let inner_m = root.matmul(sigma).matmul(&root);
    let spec = eig_hermitian(&inner_m.hermitian_part()).expect("Hermitian product");
    spec.eigenvalues
        .iter()
        .map(|&l| if l > 1e-15 { l.sqrt() } else { 0.0 })
        .sum()
}

/// Distance measures with the contractivity property.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Trace,
    OneMinusFidelity,
    RelEnt,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Trace, Metric::OneMinusFidelity, Metric::RelEnt];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Trace => "trace",
            Metric::OneMinusFidelity => "fid",
            Metric::RelEnt => "relent",
        }
    }

    /// Accepts both the short CLI names and the long names.
    pub fn parse(s: &str) -> Option<Metric> {
        match s {
            "trace" => Some(Metric::Trace),
            "fid" | "one_minus_fidelity" | "fidelity" => Some(Metric::OneMinusFidelity),
            "relent" | "rel_ent" | "relative_entropy" => Some(Metric::RelEnt),
            _ => None,
        }
    }

    pub(crate) fn eval_matrices(self, rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
        match self {
            Metric::Trace => 0.5 * trace_norm(&(rho - sigma)),
            Metric::OneMinusFidelity => 1.0 - fidelity_of_matrices(rho, sigma),
            Metric::RelEnt => relative_entropy_of_matrices(rho, sigma),
        }
    }
}

pub fn distance(metric: Metric, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    Ok(metric.eval_matrices(rho.matrix(), sigma.matrix()))
}
