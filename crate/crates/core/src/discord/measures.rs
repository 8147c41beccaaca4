use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::basis::Basis;
use crate::linalg::info::entropy_of_matrix;
use crate::linalg::matrix::{ComplexMatrix, ZERO};
use crate::linalg::state::{partial_trace_matrix, BipartiteState, Side};

pub(crate) fn check_basis(rho: &BipartiteState, b: &Basis) -> Result<()> {
    if b.dim() != rho.dim_a() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim_a(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// `Φ_A ⊗ id` on a raw operator on `A ⊗ B`.
pub(crate) fn dephase_a_matrix(m: &ComplexMatrix, dims: (usize, usize), b: &Basis) -> ComplexMatrix {
    let (da, db) = dims;
    if b.is_computational() {
        return ComplexMatrix::from_fn(da * db, da * db, |r, c| {
            if r / db == c / db {
                m[(r, c)]
            } else {
                ZERO
            }
        });
    }
    let u = b.unitary().kron(&ComplexMatrix::identity(db));
    let local = u.adjoint().matmul(m).matmul(&u);
    let kept = ComplexMatrix::from_fn(da * db, da * db, |r, c| {
        if r / db == c / db {
            local[(r, c)]
        } else {
            ZERO
        }
    });
    u.conjugate(&kept)
}

/// `Φ_A(ρ) = Σ_i (|i⟩⟨i| ⊗ I) ρ (|i⟩⟨i| ⊗ I)`.
pub fn dephase_a(rho: &BipartiteState, b: &Basis) -> Result<BipartiteState> {
    check_basis(rho, b)?;
    Ok(BipartiteState::from_matrix_unchecked(
        rho.dim_a(),
        rho.dim_b(),
        dephase_a_matrix(rho.matrix(), rho.dims(), b),
    ))
}

/// `I(A:B) = S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
pub fn mutual_information(rho: &BipartiteState) -> f64 {
    mutual_information_of(rho.matrix(), rho.dims())
}

pub(crate) fn mutual_information_of(m: &ComplexMatrix, dims: (usize, usize)) -> f64 {
    let a = partial_trace_matrix(m, dims, Side::B).expect("validated dims");
    let b = partial_trace_matrix(m, dims, Side::A).expect("validated dims");
    entropy_of_matrix(&a) + entropy_of_matrix(&b) - entropy_of_matrix(m)
}

/// `J(B|A) = I(A:B)` evaluated on `Φ_A(ρ)`.
pub fn classical_correlations(rho: &BipartiteState, b: &Basis) -> Result<f64> {
    check_basis(rho, b)?;
    let dephased = dephase_a_matrix(rho.matrix(), rho.dims(), b);
    Ok(mutual_information_of(&dephased, rho.dims()))
}

/// Correlation and coherence quantities of a bipartite state, in bits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscordReport {
    #[serde(rename = "I")]
    pub mutual_information: f64,
    #[serde(rename = "J")]
    pub classical_correlations: f64,
    #[serde(rename = "delta")]
    pub discord: f64,
    /// `S(Φ(ρ_A)) − S(ρ_A)`.
    #[serde(rename = "C_A")]
    pub local_coherence: f64,
    /// `S(Φ_A(ρ)) − S(ρ)`.
    #[serde(rename = "C_B_given_A")]
    pub conditional_coherence: f64,
}

pub fn basis_discord(rho: &BipartiteState, b: &Basis) -> Result<DiscordReport> {
    check_basis(rho, b)?;
    let dims = rho.dims();
    let m = rho.matrix();
    let dephased = dephase_a_matrix(m, dims, b);
    let rho_a = partial_trace_matrix(m, dims, Side::B)?;
    let rho_b = partial_trace_matrix(m, dims, Side::A)?;
    let s_a = entropy_of_matrix(&rho_a);
    let s_b = entropy_of_matrix(&rho_b);
    let s_ab = entropy_of_matrix(m);
    let s_dephased_a = entropy_of_matrix(&b.dephase_matrix(&rho_a));
    let s_dephased_ab = entropy_of_matrix(&dephased);

    let mutual_information = s_a + s_b - s_ab;
    let classical_correlations = s_dephased_a + s_b - s_dephased_ab;
    let report = DiscordReport {
        mutual_information,
        classical_correlations,
        discord: mutual_information - classical_correlations,
        local_coherence: s_dephased_a - s_a,
        conditional_coherence: s_dephased_ab - s_ab,
    };
    debug_assert!(
        (report.discord - (report.conditional_coherence - report.local_coherence)).abs() < 1e-6
    );
    Ok(report)
}

/// `δ(B|A)` alone.
pub fn discord(rho: &BipartiteState, b: &Basis) -> Result<f64> {
    Ok(basis_discord(rho, b)?.discord)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discord::examples::qutrit_qubit_example;
    use crate::linalg::matrix::{C64, ZERO};
    use crate::linalg::random::Sampler;
    use crate::linalg::state::DensityMatrix;

    #[test]
    fn mutual_information_examples() {
        let mut s = Sampler::new(1);
        let prod = BipartiteState::product(&s.density_matrix(2), &s.density_matrix(3));
        assert!(mutual_information(&prod).abs() < 1e-10);
        let h = C64::new(0.5_f64.sqrt(), 0.0);
        let bell = BipartiteState::new(2, 2, DensityMatrix::from_pure(&[h, ZERO, ZERO, h])).unwrap();
        assert!((mutual_information(&bell) - 2.0).abs() < 1e-10);
        // S(ρ_A) = S(ρ_B) = S(ρ_AB) = 1
        assert!((mutual_information(&qutrit_qubit_example()) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn classical_correlation_examples() {
        let mut s = Sampler::new(2);
        let z = Basis::computational(2);
        let prod = BipartiteState::product(&s.density_matrix(2), &s.density_matrix(2));
        assert!(classical_correlations(&prod, &z).unwrap().abs() < 1e-10);
        let cc = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        let cc = BipartiteState::new(2, 2, cc).unwrap();
        assert!((classical_correlations(&cc, &z).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qutrit_qubit_example_has_no_discord() {
        let r = basis_discord(&qutrit_qubit_example(), &Basis::computational(3)).unwrap();
        assert!(r.discord.abs() < 1e-9);
        assert!((r.local_coherence - r.conditional_coherence).abs() < 1e-9);
        assert!(r.local_coherence > 0.3);
    }

    #[test]
    fn identities_hold_on_random_states() {
        let mut s = Sampler::new(3);
        for trial in 0..100 {
            let (da, db) = (2 + trial % 2, 2 + (trial / 2) % 2);
            let rho = BipartiteState::new(da, db, s.density_matrix(da * db)).unwrap();
            let b = s.basis(da);
            let r = basis_discord(&rho, &b).unwrap();
            assert!(r.discord >= -1e-9);
            assert!((r.discord - (r.conditional_coherence - r.local_coherence)).abs() < 1e-9);
            let j = classical_correlations(&rho, &b).unwrap();
            assert!((j - r.classical_correlations).abs() < 1e-9);
            assert!(j <= r.mutual_information + 1e-9);
        }
    }
}
