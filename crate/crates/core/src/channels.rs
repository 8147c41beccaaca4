//! Kraus channels, Choi matrices and local application to bipartite states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::basis::Basis;
use crate::linalg::eig::{eig_hermitian, matrix_function, MatrixFunction, Spectrum};
use crate::linalg::matrix::{basis_vector, ComplexMatrix, C64, ZERO};
use crate::linalg::state::{BipartiteState, DensityMatrix, Side};

/// Tolerance on `Σ K†K` for trace preservation and trace non-increase.
pub const KRAUS_SUM_TOL: f64 = 1e-10;
/// Outcomes of probability below this are reported as negligible.
pub const NEGLIGIBLE_PROBABILITY: f64 = 1e-12;

/// Ordered Kraus operators `K_µ : C^{dim_in} → C^{dim_out}`.
///
/// The list is kept exactly as given: classification is a property of the
/// representation, not just of the channel.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
    trace_preserving: bool,
}

impl KrausChannel {
    pub fn new(dim_in: usize, dim_out: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::EmptyChannel);
        }
        for k in &kraus {
            if k.cols() != dim_in {
                return Err(Error::DimensionMismatch {
                    expected: dim_in,
                    found: k.cols(),
                });
            }
            if k.rows() != dim_out {
                return Err(Error::DimensionMismatch {
                    expected: dim_out,
                    found: k.rows(),
                });
            }
        }
        let sum = kraus_sum(&kraus, dim_in);
        let spec = eig_hermitian(&sum)?;
        let max_eigenvalue = spec.eigenvalues[0];
        if max_eigenvalue > 1.0 + KRAUS_SUM_TOL {
            return Err(Error::TraceIncreasing { max_eigenvalue });
        }
        let trace_preserving = sum.max_abs_diff(&ComplexMatrix::identity(dim_in)) < KRAUS_SUM_TOL;
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
            trace_preserving,
        })
    }

    /// Infers the dimensions from the first operator.
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let (rows, cols) = kraus.first().ok_or(Error::EmptyChannel)?.dims();
        Self::new(cols, rows, kraus)
    }

    pub fn identity(d: usize) -> Self {
        Self::unitary(ComplexMatrix::identity(d)).expect("identity is unitary")
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        let deviation = u.unitarity_deviation();
        if deviation > KRAUS_SUM_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Self::from_kraus(vec![u])
    }

    /// Weighted mixture `Σ w_k E_k`, realised by concatenating `√w_k K`.
    pub fn mixture(terms: &[(f64, &KrausChannel)]) -> Result<Self> {
        let first = terms.first().ok_or(Error::EmptyChannel)?.1;
        let mut kraus = Vec::new();
        for (w, e) in terms {
            if e.dim_in != first.dim_in || e.dim_out != first.dim_out {
                return Err(Error::DimensionMismatch {
                    expected: first.dim_in,
                    found: e.dim_in,
                });
            }
            let s = w.max(0.0).sqrt();
            kraus.extend(e.kraus.iter().map(|k| k.scale_real(s)));
        }
        Self::new(first.dim_in, first.dim_out, kraus)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn is_square(&self) -> bool {
        self.dim_in == self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    pub fn kraus_sum(&self) -> ComplexMatrix {
        kraus_sum(&self.kraus, self.dim_in)
    }

    fn check_input(&self, n: usize) -> Result<()> {
        if n != self.dim_in {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                found: n,
            });
        }
        Ok(())
    }

    pub(crate) fn require_trace_preserving(&self) -> Result<()> {
        if self.trace_preserving {
            Ok(())
        } else {
            let deviation = self
                .kraus_sum()
                .max_abs_diff(&ComplexMatrix::identity(self.dim_in));
            Err(Error::NotTracePreserving { deviation })
        }
    }

    /// `Σ K X K†` for an arbitrary operator `X`.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !x.is_square() {
            return Err(Error::NotSquare {
                rows: x.rows(),
                cols: x.cols(),
            });
        }
        self.check_input(x.rows())?;
        Ok(self.kraus.iter().map(|k| k.conjugate(x)).sum())
    }

    /// Action on a state. The output is subnormalised when the channel is
    /// not trace preserving.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_matrix_unchecked(
            self.apply_matrix(rho.matrix())?,
        ))
    }

    /// Probability and normalised conditional state of outcome `mu`.
    pub fn selected_outcome(&self, mu: usize, rho: &DensityMatrix) -> Result<Outcome> {
        self.check_input(rho.dim())?;
        let k = self.kraus.get(mu).ok_or_else(|| {
            Error::Invalid(format!("outcome {mu} of a {}-outcome channel", self.len()))
        })?;
        let out = k.conjugate(rho.matrix());
        let probability = out.trace().re.max(0.0);
        let state = (probability >= NEGLIGIBLE_PROBABILITY)
            .then(|| DensityMatrix::from_matrix_unchecked(out.scale_real(1.0 / probability)));
        Ok(Outcome { probability, state })
    }

    /// `(E ⊗ id)(|α₀₀⟩⟨α₀₀|)` with `|α₀₀⟩ = Σ_j |j⟩|j⟩ / √d_in`; output factor first.
    pub fn choi(&self) -> ChoiMatrix {
        let (din, dout) = (self.dim_in, self.dim_out);
        let mut m = ComplexMatrix::zeros(dout * din, dout * din);
        for k in &self.kraus {
            // |k⟩ = Σ_i K|i⟩ ⊗ |i⟩
            let vec: Vec<C64> = (0..dout * din).map(|idx| k[(idx / din, idx % din)]).collect();
            for r in 0..vec.len() {
                if vec[r] == ZERO {
                    continue;
                }
                for c in 0..vec.len() {
                    m[(r, c)] += vec[r] * vec[c].conj();
                }
            }
        }
        ChoiMatrix {
            dim_in: din,
            dim_out: dout,
            matrix: m.scale_real(1.0 / din as f64),
        }
    }

    /// Kraus operators embedded as `K ⊗ I` (side A) or `I ⊗ K` (side B).
    pub fn embedded(&self, side: Side, other_dim: usize) -> KrausChannel {
        let id = ComplexMatrix::identity(other_dim);
        let kraus: Vec<ComplexMatrix> = self
            .kraus
            .iter()
            .map(|k| match side {
                Side::A => k.kron(&id),
                Side::B => id.kron(k),
            })
            .collect();
        KrausChannel {
            dim_in: self.dim_in * other_dim,
            dim_out: self.dim_out * other_dim,
            kraus,
            trace_preserving: self.trace_preserving,
        }
    }

    /// `(E ⊗ id)` or `(id ⊗ E)` on a bipartite state.
    pub fn local_apply(&self, rho: &BipartiteState, side: Side) -> Result<BipartiteState> {
        let (da, db) = rho.dims();
        let (own, other) = match side {
            Side::A => (da, db),
            Side::B => (db, da),
        };
        self.check_input(own)?;
        let out = self.embedded(side, other).apply_matrix(rho.matrix())?;
        let dims = match side {
            Side::A => (self.dim_out, db),
            Side::B => (da, self.dim_out),
        };
        Ok(BipartiteState::from_matrix_unchecked(dims.0, dims.1, out))
    }

    /// Selected outcome `µ` applied locally, as `(p_µ, ρ^µ)`.
    pub fn local_outcome(
        &self,
        mu: usize,
        rho: &BipartiteState,
        side: Side,
    ) -> Result<(f64, Option<BipartiteState>)> {
        let (da, db) = rho.dims();
        let other = if side == Side::A { db } else { da };
        let embedded = self.embedded(side, other);
        let outcome = embedded.selected_outcome(mu, rho.state())?;
        let dims = match side {
            Side::A => (self.dim_out, db),
            Side::B => (da, self.dim_out),
        };
        Ok((
            outcome.probability,
            outcome
                .state
                .map(|s| BipartiteState::from_matrix_unchecked(dims.0, dims.1, s.into_matrix())),
        ))
    }

    /// `F(ρ) = Σ_µ |µ⟩⟨µ| ⊗ K_µ ρ K_µ†`: the outcome record is kept in a
    /// memory register placed before the output system.
    pub fn with_memory(&self) -> Result<KrausChannel> {
        self.require_trace_preserving()?;
        let n = self.len();
        let kraus = self
            .kraus
            .iter()
            .enumerate()
            .map(|(mu, k)| {
                ComplexMatrix::column_vector(&basis_vector(n, mu)).kron(k)
            })
            .collect();
        Ok(KrausChannel {
            dim_in: self.dim_in,
            dim_out: n * self.dim_out,
            kraus,
            trace_preserving: true,
        })
    }

    /// `T_ij = ⟨i|E(|j⟩⟨j|)|i⟩` in basis `b`.
    pub fn classical_action(&self, basis: &Basis) -> Result<StochasticAction> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                found: self.dim_out,
            });
        }
        self.check_input(basis.dim())?;
        let d = self.dim_in;
        let mut t = vec![vec![0.0; d]; d];
        for j in 0..d {
            let out = basis.to_basis(&self.apply_matrix(&basis.projector(j))?);
            for (i, row) in t.iter_mut().enumerate() {
                row[j] = out[(i, i)].re;
            }
        }
        Ok(StochasticAction { t })
    }

    /// `self` followed by `after`.
    pub fn then(&self, after: &KrausChannel) -> Result<KrausChannel> {
        if after.dim_in != self.dim_out {
            return Err(Error::DimensionMismatch {
                expected: self.dim_out,
                found: after.dim_in,
            });
        }
        let kraus = after
            .kraus
            .iter()
            .flat_map(|b| self.kraus.iter().map(move |a| b.matmul(a)))
            .collect();
        KrausChannel::new(self.dim_in, after.dim_out, kraus)
    }

    /// Appends `√(I − Σ K†K)` when the channel is trace decreasing. For
    /// channels whose `Σ K†K` is diagonal the extra operator is diagonal too.
    pub fn completed(&self) -> KrausChannel {
        if self.trace_preserving {
            return self.clone();
        }
        let defect = &ComplexMatrix::identity(self.dim_in) - &self.kraus_sum();
        let extra = matrix_function(&defect.hermitian_part(), MatrixFunction::Sqrt)
            .expect("trace non-increase makes the defect PSD");
        let mut kraus = self.kraus.clone();
        kraus.push(extra);
        KrausChannel {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            kraus,
            trace_preserving: true,
        }
    }

    /// Minimal Kraus form read off the Choi eigendecomposition.
    pub fn minimal_kraus(&self) -> KrausChannel {
        let choi = self.choi();
        let spec = choi.spectrum();
        let din = self.dim_in;
        let mut kraus = Vec::new();
        for (k, &l) in spec.eigenvalues.iter().enumerate() {
            if l <= 1e-13 {
                continue;
            }
            let v = spec.eigenvector(k);
            let s = (l * din as f64).sqrt();
            kraus.push(ComplexMatrix::from_fn(self.dim_out, din, |a, i| {
                v[a * din + i] * s
            }));
        }
        if kraus.is_empty() {
            kraus.push(ComplexMatrix::zeros(self.dim_out, din));
        }
        KrausChannel {
            dim_in: din,
            dim_out: self.dim_out,
            kraus,
            trace_preserving: self.trace_preserving,
        }
    }

    /// Largest entrywise difference of the two channels' actions on all matrix units.
    pub fn action_distance(&self, other: &KrausChannel) -> Result<f64> {
        self.check_input(other.dim_in)?;
        let d = self.dim_in;
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                let u = ComplexMatrix::unit(d, i, j);
                let a = self.apply_matrix(&u)?;
                let b = other.apply_matrix(&u)?;
                if a.dims() != b.dims() {
                    return Err(Error::DimensionMismatch {
                        expected: a.rows(),
                        found: b.rows(),
                    });
                }
                worst = worst.max(a.max_abs_diff(&b));
            }
        }
        Ok(worst)
    }
}

fn kraus_sum(kraus: &[ComplexMatrix], dim_in: usize) -> ComplexMatrix {
    let mut sum = ComplexMatrix::zeros(dim_in, dim_in);
    for k in kraus {
        sum = &sum + &k.adjoint().matmul(k);
    }
    sum
}

/// Probability and conditional state of one Kraus outcome.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub probability: f64,
    /// `None` when the outcome is negligible (`p < 1e-12`).
    pub state: Option<DensityMatrix>,
}

impl Outcome {
    pub fn is_negligible(&self) -> bool {
        self.state.is_none()
    }
}

/// Choi matrix `(E ⊗ id)(|α₀₀⟩⟨α₀₀|)`, output factor first.
#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    pub dim_in: usize,
    pub dim_out: usize,
    pub matrix: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn spectrum(&self) -> Spectrum {
        eig_hermitian(&self.matrix).expect("Choi matrices are Hermitian")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.spectrum().eigenvalues.last().expect("non-empty")
    }

    pub fn is_completely_positive(&self) -> bool {
        self.min_eigenvalue() >= -1e-9
    }
}

/// Column-substochastic matrix induced on the incoherent populations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StochasticAction {
    pub t: Vec<Vec<f64>>,
}

impl StochasticAction {
    pub fn is_substochastic(&self) -> bool {
        let cols = self.t.first().map_or(0, Vec::len);
        self.t.iter().flatten().all(|&x| x >= -1e-12)
            && (0..cols).all(|j| self.t.iter().map(|r| r[j]).sum::<f64>() <= 1.0 + 1e-10)
    }

    pub fn is_stochastic(&self) -> bool {
        let cols = self.t.first().map_or(0, Vec::len);
        self.is_substochastic()
            && (0..cols).all(|j| (self.t.iter().map(|r| r[j]).sum::<f64>() - 1.0).abs() <= 1e-10)
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        self.t
            .iter()
            .map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::info::trace_distance;
    use crate::linalg::random::Sampler;
    use crate::linalg::state::partial_trace;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn h() -> f64 {
        0.5_f64.sqrt()
    }

    /// {|0⟩⟨+|, |1⟩⟨−|}
    fn coherent_measurement() -> KrausChannel {
        let k0 = ComplexMatrix::from_real_rows(&[&[h(), h()], &[0.0, 0.0]]);
        let k1 = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[h(), -h()]]);
        KrausChannel::from_kraus(vec![k0, k1]).unwrap()
    }

    fn dephasing(d: usize) -> KrausChannel {
        KrausChannel::from_kraus((0..d).map(|i| ComplexMatrix::unit(d, i, i)).collect()).unwrap()
    }

    fn plus() -> DensityMatrix {
        DensityMatrix::from_pure(&[c(h()), c(h())])
    }

    #[test]
    fn validation() {
        assert!(matches!(KrausChannel::from_kraus(vec![]), Err(Error::EmptyChannel)));
        let big = ComplexMatrix::identity(2).scale_real(1.1);
        assert!(matches!(
            KrausChannel::from_kraus(vec![big]),
            Err(Error::TraceIncreasing { .. })
        ));
        let half = KrausChannel::from_kraus(vec![ComplexMatrix::identity(2).scale_real(0.5)])
            .unwrap();
        assert!(!half.is_trace_preserving());
        assert!(coherent_measurement().is_trace_preserving());
    }

    #[test]
    fn apply_examples() {
        let mut s = Sampler::new(1);
        let rho = s.density_matrix(3);
        let out = KrausChannel::identity(3).apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);

        let out = dephasing(2).apply(&plus()).unwrap();
        assert!(out.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);

        let out = coherent_measurement().apply(&plus()).unwrap();
        let ket0 = ComplexMatrix::unit(2, 0, 0);
        assert!(out.matrix().max_abs_diff(&ket0) < 1e-15);
        assert!(KrausChannel::identity(2).apply(&rho).is_err());
    }

    #[test]
    fn selected_outcomes() {
        let e = coherent_measurement();
        let ket0 = DensityMatrix::from_pure(&[c(1.0), ZERO]);
        let o = e.selected_outcome(0, &ket0).unwrap();
        assert!((o.probability - 0.5).abs() < 1e-15);
        assert!(o.state.unwrap().matrix().max_abs_diff(ket0.matrix()) < 1e-15);

        let rho = Sampler::new(5).density_matrix(2);
        let o = KrausChannel::identity(2).selected_outcome(0, &rho).unwrap();
        assert!((o.probability - 1.0).abs() < 1e-14);

        let o = e.selected_outcome(1, &plus()).unwrap();
        assert!(o.probability < 1e-15);
        assert!(o.is_negligible());
    }

    #[test]
    fn choi_examples() {
        let spec = KrausChannel::identity(2).choi().spectrum();
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!(spec.eigenvalues[1..].iter().all(|l| l.abs() < 1e-14));

        // depolarizing p = 0 on a qubit: E(ρ) = I/2 via the four Paulis at weight 1/4
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let z = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let y = ComplexMatrix::from_rows(&[
            vec![ZERO, C64::new(0.0, -1.0)],
            vec![C64::new(0.0, 1.0), ZERO],
        ])
        .unwrap();
        let e = KrausChannel::from_kraus(
            [ComplexMatrix::identity(2), x, y, z]
                .iter()
                .map(|k| k.scale_real(0.5))
                .collect(),
        )
        .unwrap();
        let choi = e.choi();
        assert!(choi.matrix.max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-15);
    }

    #[test]
    fn local_dephasing_of_product() {
        let mut s = Sampler::new(3);
        let a = s.density_matrix(2);
        let b = s.density_matrix(3);
        let ab = BipartiteState::product(&a, &b);
        let out = dephasing(2).local_apply(&ab, Side::A).unwrap();
        let want = dephasing(2).apply(&a).unwrap().tensor(&b);
        assert!(out.matrix().max_abs_diff(want.matrix()) < 1e-15);
        let same = KrausChannel::identity(3).local_apply(&ab, Side::B).unwrap();
        assert!(same.matrix().max_abs_diff(ab.matrix()) < 1e-15);
    }

    #[test]
    fn memory_examples() {
        let u = Sampler::new(2).unitary(2);
        let e = KrausChannel::unitary(u).unwrap().with_memory().unwrap();
        assert_eq!(e.dim_out(), 2);
        let out = dephasing(2).with_memory().unwrap();
        let rho = out.apply(&DensityMatrix::maximally_mixed(2)).unwrap();
        let p00 = ComplexMatrix::unit(2, 0, 0);
        let p11 = ComplexMatrix::unit(2, 1, 1);
        let want = &p00.kron(&p00).scale_real(0.5) + &p11.kron(&p11).scale_real(0.5);
        assert!(rho.matrix().max_abs_diff(&want) < 1e-15);

        let half = KrausChannel::from_kraus(vec![ComplexMatrix::identity(2).scale_real(0.5)])
            .unwrap();
        assert!(half.with_memory().is_err());
    }

    #[test]
    fn memory_marginal_matches_apply() {
        let mut s = Sampler::new(10);
        let e = coherent_measurement();
        let m = e.with_memory().unwrap();
        for _ in 0..100 {
            let rho = s.density_matrix(2);
            let full = BipartiteState::from_matrix_unchecked(
                2,
                2,
                m.apply(&rho).unwrap().into_matrix(),
            );
            let marginal = partial_trace(&full, Side::A);
            assert!(marginal.matrix().max_abs_diff(e.apply(&rho).unwrap().matrix()) < 1e-10);
        }
    }

    #[test]
    fn classical_action_examples() {
        let d = 3;
        let perm = ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let t = KrausChannel::unitary(perm.clone())
            .unwrap()
            .classical_action(&Basis::computational(d))
            .unwrap();
        for i in 0..d {
            for j in 0..d {
                assert!((t.t[i][j] - perm[(i, j)].re).abs() < 1e-15);
            }
        }
        let t = dephasing(3).classical_action(&Basis::computational(3)).unwrap();
        assert_eq!(t.t, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        assert!(t.is_stochastic());
    }

    #[test]
    fn compose_matches_sequential_application() {
        let mut s = Sampler::new(21);
        for _ in 0..200 {
            let e1 = KrausChannel::mixture(&[
                (0.3, &KrausChannel::unitary(s.unitary(2)).unwrap()),
                (0.7, &coherent_measurement()),
            ])
            .unwrap();
            let e2 = KrausChannel::unitary(s.unitary(2)).unwrap();
            let rho = s.density_matrix(2);
            let seq = e2.apply(&e1.apply(&rho).unwrap()).unwrap();
            let joint = e1.then(&e2).unwrap().apply(&rho).unwrap();
            assert!(seq.matrix().max_abs_diff(joint.matrix()) < 1e-10);
        }
    }

    #[test]
    fn completion_and_minimal_form() {
        let k = ComplexMatrix::from_real_diag(&[1.0, 0.5]);
        let e = KrausChannel::from_kraus(vec![k]).unwrap();
        let full = e.completed();
        assert!(full.is_trace_preserving());
        let extra = &full.kraus()[1];
        assert!((extra[(1, 1)].re - 0.75_f64.sqrt()).abs() < 1e-14);
        assert!(extra[(0, 1)].norm() < 1e-15 && extra[(0, 0)].norm() < 1e-7);

        let e = coherent_measurement();
        let min = e.minimal_kraus();
        assert!(e.action_distance(&min).unwrap() < 1e-12);
        let rho = Sampler::new(4).density_matrix(2);
        assert!(trace_distance(&e.apply(&rho).unwrap(), &min.apply(&rho).unwrap()) < 1e-12);
    }
}
