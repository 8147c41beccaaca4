//! Fixed states and channels with known correlation behaviour.

use crate::channels::KrausChannel;
use crate::linalg::matrix::{ComplexMatrix, C64, ZERO};
use crate::linalg::state::{BipartiteState, DensityMatrix};

/// `½(|+₀₁⟩⟨+₀₁| ⊗ |0⟩⟨0| + |2⟩⟨2| ⊗ |1⟩⟨1|)`: a qutrit–qubit state with local
/// coherence but no basis-dependent discord.
pub fn qutrit_qubit_example() -> BipartiteState {
    let h = C64::new(0.5_f64.sqrt(), 0.0);
    let plus = DensityMatrix::from_pure(&[h, h, ZERO]);
    let two = DensityMatrix::from_pure(&[ZERO, ZERO, C64::new(1.0, 0.0)]);
    let b0 = ComplexMatrix::unit(2, 0, 0);
    let b1 = ComplexMatrix::unit(2, 1, 1);
    let m = &plus.matrix().kron(&b0).scale_real(0.5) + &two.matrix().kron(&b1).scale_real(0.5);
    BipartiteState::from_matrix_unchecked(3, 2, m)
}

/// Equal mixture of the identity and the exchange `|1⟩ ↔ |2⟩` on a qutrit.
pub fn mixing_channel() -> KrausChannel {
    let h = 0.5_f64.sqrt();
    let swap = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]]);
    KrausChannel::from_kraus(vec![ComplexMatrix::identity(3).scale_real(h), swap.scale_real(h)])
        .expect("unitary mixture")
}

/// [`mixing_channel`] applied on A of [`qutrit_qubit_example`]:
/// `¼(|+₀₁⟩⟨+₀₁| ⊗ |0⟩⟨0| + |+₀₂⟩⟨+₀₂| ⊗ |0⟩⟨0| + |2⟩⟨2| ⊗ |1⟩⟨1| + |1⟩⟨1| ⊗ |1⟩⟨1|)`.
pub fn mixed_example() -> BipartiteState {
    mixing_channel()
        .local_apply(&qutrit_qubit_example(), crate::linalg::state::Side::A)
        .expect("dimensions match")
}

/// `{|0⟩⟨+|, |1⟩⟨−|}`: a measurement in the coherent basis, incoherent but
/// not strictly incoherent.
pub fn coherent_measurement() -> KrausChannel {
    let h = 0.5_f64.sqrt();
    let k0 = ComplexMatrix::from_real_rows(&[&[h, h], &[0.0, 0.0]]);
    let k1 = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[h, -h]]);
    KrausChannel::from_kraus(vec![k0, k1]).expect("trace preserving")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig::eig_hermitian;
    use crate::linalg::state::Side;

    #[test]
    fn mixed_example_matches_the_four_term_form() {
        let h = C64::new(0.5_f64.sqrt(), 0.0);
        let one = C64::new(1.0, 0.0);
        let terms = [
            (vec![h, h, ZERO], 0),
            (vec![h, ZERO, h], 0),
            (vec![ZERO, ZERO, one], 1),
            (vec![ZERO, one, ZERO], 1),
        ];
        let want: ComplexMatrix = terms
            .iter()
            .map(|(v, b)| ComplexMatrix::projector(v).kron(&ComplexMatrix::unit(2, *b, *b)).scale_real(0.25))
            .sum();
        assert!(mixed_example().matrix().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn mixed_example_marginal_spectrum() {
        let a = mixed_example().reduced(Side::A);
        let spec = eig_hermitian(a.matrix()).unwrap();
        for (g, w) in spec.eigenvalues.iter().zip([0.5, 0.375, 0.125]) {
            assert!((g - w).abs() < 1e-12);
        }
    }
}
