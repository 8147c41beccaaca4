//! Ancilla dilation of strictly incoherent channels.
//!
//! Every SI channel `K_µ = Σ_i c^µ_i |π_µ(i)⟩⟨i|` is realised by: attach an
//! ancilla in `|0⟩`, apply the controlled unitary `Σ_i |i⟩⟨i| ⊗ U_i` whose
//! blocks satisfy `⟨µ|U_i|0⟩ = c^µ_i`, measure the ancilla in its
//! computational basis and on outcome `µ` apply the permutation `V_µ`.

use serde::Serialize;

use crate::channels::KrausChannel;
use crate::coherence::classify::{classify_channel, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::linalg::basis::Basis;
use crate::linalg::info::trace_norm;
use crate::linalg::matrix::{complete_orthonormal, ComplexMatrix, C64, ONE, ZERO};
use crate::linalg::random::Sampler;

#[derive(Clone, Debug, Serialize)]
pub struct DilationSpec {
    pub basis: Basis,
    pub ancilla_dim: usize,
    /// `U_i`, one per basis index.
    pub control_unitaries: Vec<ComplexMatrix>,
    pub measurement_basis: Basis,
    /// `V_µ` in basis coordinates; the last outcome is the residual one and
    /// carries the identity.
    pub conditional_unitaries: Vec<ComplexMatrix>,
    /// Kraus operators reproduced by outcomes `0..n`, after any padding.
    pub kraus_count: usize,
    /// Whether a diagonal operator was appended to reach trace preservation.
    pub padded: bool,
}

impl DilationSpec {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

/// Builds the dilation of an SI channel.
pub fn dilation_construct(e: &KrausChannel, b: &Basis) -> Result<DilationSpec> {
    let report = classify_channel(e, b, None, DEFAULT_TOL)?;
    if !report.strictly_incoherent {
        return Err(Error::NotStrictlyIncoherent {
            violation: report.si_violation,
        });
    }
    let padded = !e.is_trace_preserving();
    let full = e.completed();
    let forms = if padded {
        classify_channel(&full, b, None, DEFAULT_TOL)?.kraus_forms
    } else {
        report.kraus_forms
    };
    let d = b.dim();
    let k = forms.len();
    let ancilla_dim = k + 1;

    let control_unitaries = (0..d)
        .map(|i| {
            let mut first: Vec<C64> = forms.iter().map(|f| f.coefficients[i]).collect();
            let weight: f64 = first.iter().map(|c| c.norm_sqr()).sum();
            first.push(C64::new((1.0 - weight).max(0.0).sqrt(), 0.0));
            let n = first.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let first: Vec<C64> = first.iter().map(|c| c / n).collect();
            ComplexMatrix::from_columns(&complete_orthonormal(&[first], ancilla_dim))
        })
        .collect();

    let mut conditional_unitaries: Vec<ComplexMatrix> = forms
        .iter()
        .map(|f| {
            let pi = f.permutation.as_ref().expect("SI forms carry a permutation");
            ComplexMatrix::from_fn(d, d, |r, c| if pi[c] == r { ONE } else { ZERO })
        })
        .collect();
    conditional_unitaries.push(ComplexMatrix::identity(d));

    Ok(DilationSpec {
        basis: b.clone(),
        ancilla_dim,
        control_unitaries,
        measurement_basis: Basis::computational(ancilla_dim),
        conditional_unitaries,
        kraus_count: k,
        padded,
    })
}

/// Unnormalised conditional outputs of the dilation on a system operator
/// `rho` (computational coordinates), one per ancilla outcome.
pub fn dilation_outputs(spec: &DilationSpec, rho: &ComplexMatrix) -> Vec<ComplexMatrix> {
    let d = spec.dim();
    let a = spec.ancilla_dim;
    let local = spec.basis.to_basis(rho);
    let mut ket0 = ComplexMatrix::zeros(a, a);
    ket0[(0, 0)] = ONE;
    let joint = local.kron(&ket0);

    let mut control = ComplexMatrix::zeros(d * a, d * a);
    for (i, u) in spec.control_unitaries.iter().enumerate() {
        for r in 0..a {
            for c in 0..a {
                control[(i * a + r, i * a + c)] = u[(r, c)];
            }
        }
    }
    let after = control.conjugate(&joint);

    (0..a)
        .map(|mu| {
            let phi = spec.measurement_basis.vector(mu);
            let block = ComplexMatrix::from_fn(d, d, |i, j| {
                let mut acc = ZERO;
                for r in 0..a {
                    for c in 0..a {
                        acc += phi[r].conj() * after[(i * a + r, j * a + c)] * phi[c];
                    }
                }
                acc
            });
            spec.basis
                .from_basis(&spec.conditional_unitaries[mu].conjugate(&block))
        })
        .collect()
}

/// Largest trace-norm gap between the dilation's selected outputs and
/// `K_µ ρ K_µ†` over `n_states` random states. Outcomes beyond the channel's
/// own Kraus list are compared with the padding operator, or with zero.
pub fn dilation_verify(
    spec: &DilationSpec,
    e: &KrausChannel,
    n_states: usize,
    seed: u64,
) -> Result<f64> {
    if e.dim_in() != spec.dim() || !e.is_square() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: e.dim_in(),
        });
    }
    let full = e.completed();
    let mut sampler = Sampler::new(seed);
    let mut worst = 0.0_f64;
    for _ in 0..n_states {
        let rho = sampler.density_matrix(spec.dim());
        let outputs = dilation_outputs(spec, rho.matrix());
        for (mu, out) in outputs.iter().enumerate() {
            let want = match full.kraus().get(mu) {
                Some(k) if mu < spec.kraus_count => k.conjugate(rho.matrix()),
                _ => ComplexMatrix::zeros(spec.dim(), spec.dim()),
            };
            worst = worst.max(trace_norm(&(out - &want).hermitian_part()));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> f64 {
        0.5_f64.sqrt()
    }

    #[test]
    fn permutation_channel() {
        let p = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
        let e = KrausChannel::unitary(p.clone()).unwrap();
        let spec = dilation_construct(&e, &Basis::computational(3)).unwrap();
        assert_eq!(spec.kraus_count, 1);
        assert_eq!(spec.conditional_unitaries[0], p);
        for u in &spec.control_unitaries {
            assert!((u[(0, 0)] - ONE).norm() < 1e-15);
        }
        assert!(dilation_verify(&spec, &e, 20, 1).unwrap() < 1e-10);
    }

    #[test]
    fn two_operator_example() {
        let k0 = ComplexMatrix::from_real_diag(&[1.0, h()]);
        let k1 = ComplexMatrix::unit(2, 0, 1).scale_real(h());
        let e = KrausChannel::from_kraus(vec![k0, k1]).unwrap();
        let spec = dilation_construct(&e, &Basis::computational(2)).unwrap();
        assert_eq!(spec.ancilla_dim, 3);
        let col0 = spec.control_unitaries[0].column(0);
        let col1 = spec.control_unitaries[1].column(0);
        for (g, w) in col0.iter().zip([1.0, 0.0, 0.0]) {
            assert!((g - C64::new(w, 0.0)).norm() < 1e-15);
        }
        for (g, w) in col1.iter().zip([h(), h(), 0.0]) {
            assert!((g - C64::new(w, 0.0)).norm() < 1e-15);
        }
        assert!(dilation_verify(&spec, &e, 50, 2).unwrap() < 1e-10);
    }

    #[test]
    fn identity_channel_is_exact() {
        let e = KrausChannel::identity(2);
        let spec = dilation_construct(&e, &Basis::computational(2)).unwrap();
        assert!(dilation_verify(&spec, &e, 10, 3).unwrap() < 1e-15);
    }

    #[test]
    fn dropping_the_permutations_breaks_the_round_trip() {
        let swap = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = KrausChannel::from_kraus(vec![
            ComplexMatrix::identity(2).scale_real(h()),
            swap.scale_real(h()),
        ])
        .unwrap();
        let mut spec = dilation_construct(&e, &Basis::computational(2)).unwrap();
        for v in spec.conditional_unitaries.iter_mut() {
            *v = ComplexMatrix::identity(2);
        }
        assert!(dilation_verify(&spec, &e, 20, 4).unwrap() > 0.1);
    }

    #[test]
    fn trace_decreasing_input_is_padded() {
        let e = KrausChannel::from_kraus(vec![ComplexMatrix::unit(2, 0, 1).scale_real(0.8)]).unwrap();
        let spec = dilation_construct(&e, &Basis::computational(2)).unwrap();
        assert!(spec.padded);
        assert_eq!(spec.kraus_count, 2);
        assert!(dilation_verify(&spec, &e, 20, 5).unwrap() < 1e-10);
    }

    #[test]
    fn rotated_basis() {
        let b = Sampler::new(9).basis(3);
        let p = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]);
        let e = KrausChannel::from_kraus(vec![
            b.from_basis(&ComplexMatrix::from_real_diag(&[0.6, 0.0, 1.0])),
            b.from_basis(&p.matmul(&ComplexMatrix::from_real_diag(&[0.8, 1.0, 0.0]))),
        ])
        .unwrap();
        let spec = dilation_construct(&e, &b).unwrap();
        assert!(dilation_verify(&spec, &e, 20, 6).unwrap() < 1e-10);
        assert!(dilation_construct(&e, &Basis::computational(3)).is_err());
    }
}
