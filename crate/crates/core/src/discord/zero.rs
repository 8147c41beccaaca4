//! Explicit decomposition of zero-discord states.
//!
//! A state has `δ(B|A) = 0` exactly when it can be written as
//! `Σ_α p_α ρ_A^α ⊗ ρ_B^α` with the `ρ_A^α` supported on disjoint sets of
//! incoherent basis states. The blocks are found by grouping eigenvectors of
//! `ρ_A` whose coherence-supports overlap.

use serde::Serialize;

use crate::discord::measures::check_basis;
use crate::error::Result;
use crate::linalg::basis::Basis;
use crate::linalg::eig::eig_hermitian;
use crate::linalg::info::trace_norm;
use crate::linalg::matrix::{ComplexMatrix, C64};
use crate::linalg::state::{BipartiteState, Side};

/// Default tolerance for supports and for equality of conditional states.
pub const ZERO_DISCORD_TOL: f64 = 1e-7;
/// Eigenvalues of `ρ_A` closer than this are treated as one eigenspace.
const DEGENERACY_TOL: f64 = 1e-9;
const SUPPORT_CUTOFF: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct DiscordBlock {
    pub weight: f64,
    pub state_a: ComplexMatrix,
    pub state_b: ComplexMatrix,
    /// Incoherent basis indices the A-part is supported on.
    pub support: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionFailure {
    /// Eigenvectors grouped into one block have different conditional states on B.
    UnequalEigenConditionals { block: usize },
    /// The conditional state of an incoherent basis state differs from its block's.
    UnequalBasisConditional { block: usize, index: usize },
    /// The assembled blocks do not reproduce the input.
    Reconstruction,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroDiscordDecomposition {
    pub blocks: Vec<DiscordBlock>,
    /// Trace norm of the difference between the input and the block sum.
    pub residual: f64,
    /// `None` on success.
    pub failure: Option<DecompositionFailure>,
}

impl ZeroDiscordDecomposition {
    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = x;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

/// Eigenvectors of the support of `ρ_A` (basis coordinates), rotated inside
/// each degenerate eigenspace so that they align with coherence-support blocks
/// whenever such an alignment exists.
fn aligned_eigenvectors(rho_a_local: &ComplexMatrix) -> Vec<(f64, Vec<C64>)> {
    let spec = eig_hermitian(rho_a_local).expect("reduced states are Hermitian");
    let d = spec.dim();
    let mut out = Vec::new();
    let mut k = 0;
    while k < d && spec.eigenvalues[k] > SUPPORT_CUTOFF {
        let mut end = k + 1;
        while end < d && (spec.eigenvalues[end] - spec.eigenvalues[k]).abs() < DEGENERACY_TOL {
            end += 1;
        }
        let vectors: Vec<Vec<C64>> = (k..end).map(|j| spec.eigenvector(j)).collect();
        let lambda = spec.eigenvalues[k..end].iter().sum::<f64>() / (end - k) as f64;
        if vectors.len() == 1 {
            out.push((spec.eigenvalues[k], vectors[0].clone()));
        } else {
            // Generic diagonal D: Q†DQ is block diagonal in any aligned basis
            // of the eigenspace, so its eigenvectors pick one out.
            let q = ComplexMatrix::from_columns(&vectors);
            let weights: Vec<f64> = (0..d).map(|i| ((i + 2) as f64).sqrt()).collect();
            let m = q.adjoint().matmul(&ComplexMatrix::from_real_diag(&weights)).matmul(&q);
            let inner = eig_hermitian(&m.hermitian_part()).expect("Hermitian");
            let rotated = q.matmul(&inner.eigenvectors);
            for j in 0..vectors.len() {
                out.push((lambda, rotated.column(j)));
            }
        }
        k = end;
    }
    out
}

fn normalized(m: ComplexMatrix) -> ComplexMatrix {
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}

pub fn zero_discord_decompose(
    rho: &BipartiteState,
    b: &Basis,
    tol: f64,
) -> Result<ZeroDiscordDecomposition> {
    check_basis(rho, b)?;
    let (da, db) = rho.dims();
    let u = b.unitary().kron(&ComplexMatrix::identity(db));
    let local = BipartiteState::from_matrix_unchecked(da, db, u.adjoint().matmul(rho.matrix()).matmul(&u));
    let rho_a = local.reduced(Side::A);
    let eigen = aligned_eigenvectors(rho_a.matrix());

    let supports: Vec<Vec<usize>> = eigen
        .iter()
        .map(|(_, v)| (0..da).filter(|&i| v[i].norm() > tol).collect())
        .collect();

    let mut parent: Vec<usize> = (0..eigen.len()).collect();
    for a in 0..eigen.len() {
        for c in a + 1..eigen.len() {
            if supports[a].iter().any(|i| supports[c].contains(i)) {
                let (ra, rc) = (find(&mut parent, a), find(&mut parent, c));
                parent[ra.max(rc)] = ra.min(rc);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; eigen.len()];
    for a in 0..eigen.len() {
        let r = find(&mut parent, a);
        match root_of[r] {
            Some(g) => groups[g].push(a),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![a]);
            }
        }
    }

    let mut failure = None;
    let mut blocks_local = Vec::with_capacity(groups.len());
    for (g, members) in groups.iter().enumerate() {
        let conditionals: Vec<ComplexMatrix> = members
            .iter()
            .map(|&a| normalized(local.conditional_on(&eigen[a].1)))
            .collect();
        let reference = &conditionals[0];
        if failure.is_none()
            && conditionals[1..]
                .iter()
                .any(|c| 0.5 * trace_norm(&(c - reference).hermitian_part()) >= tol)
        {
            failure = Some(DecompositionFailure::UnequalEigenConditionals { block: g });
        }
        let mut support: Vec<usize> = members.iter().flat_map(|&a| supports[a].clone()).collect();
        support.sort_unstable();
        support.dedup();
        for &i in &support {
            let block = local.block(i, i);
            let p = block.trace().re;
            if p < SUPPORT_CUTOFF || failure.is_some() {
                continue;
            }
            if 0.5 * trace_norm(&(&block.scale_real(1.0 / p) - reference).hermitian_part()) >= tol {
                failure = Some(DecompositionFailure::UnequalBasisConditional { block: g, index: i });
            }
        }
        let weight: f64 = members.iter().map(|&a| eigen[a].0).sum();
        let state_a: ComplexMatrix = members
            .iter()
            .map(|&a| ComplexMatrix::projector(&eigen[a].1).scale_real(eigen[a].0 / weight))
            .sum();
        // the block's B-state is the average of its eigen-conditionals
        let state_b: ComplexMatrix = members
            .iter()
            .zip(&conditionals)
            .map(|(&a, c)| c.scale_real(eigen[a].0 / weight))
            .sum();
        blocks_local.push((weight, state_a, state_b, support));
    }

    let total: f64 = blocks_local.iter().map(|b| b.0).sum();
    let reconstruction: ComplexMatrix = blocks_local
        .iter()
        .map(|(w, a, s, _)| a.kron(s).scale_real(w / total))
        .sum();
    let residual = trace_norm(&(local.matrix() - &reconstruction).hermitian_part());
    if failure.is_none() && residual > tol.max(1e-6) {
        failure = Some(DecompositionFailure::Reconstruction);
    }

    let blocks = blocks_local
        .into_iter()
        .map(|(weight, state_a, state_b, support)| DiscordBlock {
            weight: weight / total,
            state_a: b.from_basis(&state_a),
            state_b,
            support,
        })
        .collect();
    Ok(ZeroDiscordDecomposition {
        blocks,
        residual,
        failure,
    })
}
