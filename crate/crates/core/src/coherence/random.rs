//! Random channels with prescribed structure in a basis.

use crate::channels::KrausChannel;
use crate::linalg::basis::Basis;
use crate::linalg::matrix::{ComplexMatrix, C64, ZERO};
use crate::linalg::random::Sampler;

/// `(µ, i)` coefficient array with every column normalised, so that the
/// resulting Kraus set is trace preserving.
fn normalized_coefficients(sampler: &mut Sampler, n: usize, d: usize) -> Vec<Vec<C64>> {
    let mut c: Vec<Vec<C64>> = (0..n).map(|_| sampler.gaussian_vector(d)).collect();
    for i in 0..d {
        let norm = (0..n).map(|mu| c[mu][i].norm_sqr()).sum::<f64>().sqrt();
        for row in c.iter_mut() {
            row[i] /= norm;
        }
    }
    c
}

fn into_channel(b: &Basis, local: Vec<ComplexMatrix>) -> KrausChannel {
    let kraus = local.iter().map(|k| b.from_basis(k)).collect();
    KrausChannel::from_kraus(kraus).expect("trace preserving by construction")
}

/// Kraus operators `Σ_i c^µ_i |π_µ(i)⟩⟨i|` in basis coordinates.
pub(crate) fn random_si_kraus_local(sampler: &mut Sampler, d: usize, n: usize) -> Vec<ComplexMatrix> {
    let perms: Vec<Vec<usize>> = (0..n).map(|_| sampler.permutation(d)).collect();
    let c = normalized_coefficients(sampler, n, d);
    (0..n)
        .map(|mu| {
            ComplexMatrix::from_fn(d, d, |r, i| if perms[mu][i] == r { c[mu][i] } else { ZERO })
        })
        .collect()
}

/// Trace-preserving SI channel with `n_kraus` operators, uniformly random
/// permutations and Gaussian coefficients.
pub fn random_si_channel(sampler: &mut Sampler, d: usize, n_kraus: usize, b: &Basis) -> KrausChannel {
    let local = random_si_kraus_local(sampler, d, n_kraus.max(1));
    into_channel(b, local)
}

/// Trace-preserving channel with diagonal Kraus operators in `b`.
pub fn random_gi_channel(sampler: &mut Sampler, d: usize, n_kraus: usize, b: &Basis) -> KrausChannel {
    let n = n_kraus.max(1);
    let c = normalized_coefficients(sampler, n, d);
    let local = (0..n).map(|mu| ComplexMatrix::from_diag(&c[mu])).collect();
    into_channel(b, local)
}

/// Incoherent channel that creates coherence-dependent populations.
///
/// A random SI channel at weight `1 − w` is mixed with a measurement of the
/// pair `{|i⟩, |j⟩}` in a coherent basis `{χ, χ⊥}` whose outcomes are sent
/// to distinct basis states `|a⟩ ≠ |b⟩`, completed by `I − P_ij`.
pub fn random_incoherent_non_si_channel(sampler: &mut Sampler, d: usize, b: &Basis) -> KrausChannel {
    let w = sampler.uniform_in(0.3, 1.0);
    let n_si = 1 + sampler.index(2);
    let mut local: Vec<ComplexMatrix> = random_si_kraus_local(sampler, d, n_si)
        .into_iter()
        .map(|k| k.scale_real((1.0 - w).sqrt()))
        .collect();

    let order = sampler.permutation(d);
    let (i, j) = (order[0], order[1]);
    let targets = sampler.permutation(d);
    let (a, b_out) = (targets[0], targets[1]);
    let weight = sampler.uniform_in(0.2, 0.8);
    let (ci, cj) = (
        C64::from_polar(weight.sqrt(), sampler.uniform_in(0.0, std::f64::consts::TAU)),
        C64::from_polar((1.0 - weight).sqrt(), sampler.uniform_in(0.0, std::f64::consts::TAU)),
    );
    // χ = ci|i⟩ + cj|j⟩, χ⊥ = −cj*|i⟩ + ci*|j⟩
    let sw = w.sqrt();
    let mut k_chi = ComplexMatrix::zeros(d, d);
    k_chi[(a, i)] = ci.conj() * sw;
    k_chi[(a, j)] = cj.conj() * sw;
    let mut k_perp = ComplexMatrix::zeros(d, d);
    k_perp[(b_out, i)] = -cj * sw;
    k_perp[(b_out, j)] = ci * sw;
    local.push(k_chi);
    local.push(k_perp);
    if d > 2 {
        let rest: Vec<f64> = (0..d)
            .map(|k| if k == i || k == j { 0.0 } else { sw })
            .collect();
        local.push(ComplexMatrix::from_real_diag(&rest));
    }
    into_channel(b, local)
}
