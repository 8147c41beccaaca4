//! Petz recovery of local dephasing.

use crate::channels::KrausChannel;
use crate::discord::measures::{check_basis, dephase_a_matrix};
use crate::error::Result;
use crate::linalg::basis::Basis;
use crate::linalg::eig::{matrix_function, MatrixFunction};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::state::{BipartiteState, Side};

/// Populations below this are outside the support of `ρ_A` and dropped.
pub const POPULATION_CUTOFF: f64 = 1e-12;

/// A trace-preserving channel meant to act on side A (or on memory ⊗ A).
#[derive(Clone, Debug)]
pub struct RecoveryChannel {
    pub channel: KrausChannel,
}

impl RecoveryChannel {
    pub fn apply(&self, rho: &BipartiteState) -> Result<BipartiteState> {
        self.channel.local_apply(rho, Side::A)
    }
}

/// `R(X) = ρ_A^{1/2} Φ(Φ(ρ_A)^{−1/2} X Φ(ρ_A)^{−1/2}) ρ_A^{1/2}` with Kraus
/// operators `ρ_A^{1/2}|i⟩⟨i|/√p_i`; the dropped basis states are sent to
/// themselves so the map is trace preserving.
pub fn petz_channel(rho_a: &ComplexMatrix, b: &Basis) -> Result<KrausChannel> {
    let d = b.dim();
    let root = matrix_function(rho_a, MatrixFunction::Sqrt)?;
    let mut kraus = Vec::with_capacity(d + 1);
    let mut dropped = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        let projector = b.projector(i);
        let p = projector.matmul(rho_a).trace().re;
        if p < POPULATION_CUTOFF {
            dropped = &dropped + &projector;
        } else {
            kraus.push(root.matmul(&projector).scale_real(1.0 / p.sqrt()));
        }
    }
    if dropped.max_abs() > 0.0 {
        kraus.push(dropped);
    }
    KrausChannel::new(d, d, kraus)
}

/// Petz recovery `R_A(Φ_A(ρ))` of a bipartite state.
pub fn petz_recover(rho: &BipartiteState, b: &Basis) -> Result<(RecoveryChannel, BipartiteState)> {
    check_basis(rho, b)?;
    let rho_a = rho.reduced(Side::A);
    let channel = petz_channel(rho_a.matrix(), b)?;
    let dephased = BipartiteState::from_matrix_unchecked(
        rho.dim_a(),
        rho.dim_b(),
        dephase_a_matrix(rho.matrix(), rho.dims(), b),
    );
    let recovered = channel.local_apply(&dephased, Side::A)?;
    Ok((RecoveryChannel { channel }, recovered))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discord::examples::{mixed_example, qutrit_qubit_example};
    use crate::linalg::info::trace_distance;
    use crate::linalg::random::Sampler;
    use crate::linalg::state::DensityMatrix;

    #[test]
    fn zero_discord_example_is_recovered() {
        let rho = qutrit_qubit_example();
        let (r, recovered) = petz_recover(&rho, &Basis::computational(3)).unwrap();
        assert!(r.channel.is_trace_preserving());
        assert!(trace_distance(rho.state(), recovered.state()) < 1e-8);
    }

    #[test]
    fn incoherent_quantum_states_are_fixed() {
        let mut s = Sampler::new(4);
        let (p0, p1) = (0.3, 0.7);
        let m = &ComplexMatrix::unit(2, 0, 0).kron(s.density_matrix(2).matrix()).scale_real(p0)
            + &ComplexMatrix::unit(2, 1, 1).kron(s.density_matrix(2).matrix()).scale_real(p1);
        let rho = BipartiteState::new(2, 2, DensityMatrix::new(m).unwrap()).unwrap();
        let (_, recovered) = petz_recover(&rho, &Basis::computational(2)).unwrap();
        assert!(trace_distance(rho.state(), recovered.state()) < 1e-10);
    }

    #[test]
    fn discordant_state_is_not_recovered() {
        let rho = mixed_example();
        let (_, recovered) = petz_recover(&rho, &Basis::computational(3)).unwrap();
        assert!(trace_distance(rho.state(), recovered.state()) > 0.01);
    }

    #[test]
    fn rank_deficient_marginal_gets_a_complement() {
        let rho = BipartiteState::product(
            &DensityMatrix::diagonal(&[1.0, 0.0]).unwrap(),
            &DensityMatrix::maximally_mixed(2),
        );
        let (r, recovered) = petz_recover(&rho, &Basis::computational(2)).unwrap();
        assert_eq!(r.channel.len(), 2);
        assert!(r.channel.is_trace_preserving());
        assert!(trace_distance(rho.state(), recovered.state()) < 1e-12);
    }
}
