//! Recoverability `Δ_D(B|A) = min_R D(ρ, R_A ∘ Φ_A(ρ))` and its behaviour
//! when an SI channel keeps a memory of its outcome.
//!
//! Recovery channels are parametrised through a Stiefel dilation: a unitary
//! `V = V₀ exp(A)` on `A ⊗ ancilla` with `A` anti-Hermitian and nonzero only
//! where it moves the input columns `|x⟩|0⟩`, followed by discarding the
//! ancilla. The minimisation runs simplex descent from the Petz channel and
//! from Haar-random `V₀`; any further candidate channels are evaluated
//! directly, so the result never exceeds the best candidate.

use serde::Serialize;

use crate::channels::KrausChannel;
use crate::coherence::classify::{classify_channel, DEFAULT_TOL};
use crate::discord::measures::{check_basis, dephase_a_matrix};
use crate::discord::petz::{petz_channel, RecoveryChannel};
use crate::error::{Error, Result};
use crate::linalg::basis::Basis;
use crate::linalg::eig::expi_hermitian;
use crate::linalg::info::Metric;
use crate::linalg::matrix::{complete_orthonormal, ComplexMatrix, C64, ONE, ZERO};
use crate::linalg::random::Sampler;
use crate::linalg::state::{partial_trace_matrix, BipartiteState, Side};
use crate::optim::NelderMead;

/// Objective values at or below this count as exact recovery and stop the search.
const EXACT_RECOVERY: f64 = 1e-14;

/// Optimizer slack for the memory inequality.
pub const MEMORY_SLACK: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecoveryBudget {
    /// Number of descents, the first from the Petz channel.
    pub restarts: usize,
    pub max_iters: usize,
    /// Ancilla dimension; `None` means `d_A²`.
    pub ancilla_dim: Option<usize>,
    pub seed: u64,
}

impl Default for RecoveryBudget {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_iters: 2000,
            ancilla_dim: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Recoverability {
    /// Best value found; an upper bound on `Δ_D`.
    pub value: f64,
    pub petz_value: f64,
    pub best: RecoveryChannel,
}

/// Assembled objective: `D(target, (R ⊗ id)(input))`.
struct Problem<'a> {
    target: &'a ComplexMatrix,
    input: &'a ComplexMatrix,
    dims: (usize, usize),
    metric: Metric,
}

impl Problem<'_> {
    fn evaluate(&self, kraus: &[ComplexMatrix]) -> f64 {
        let id = ComplexMatrix::identity(self.dims.1);
        let out: ComplexMatrix = kraus.iter().map(|k| k.kron(&id).conjugate(self.input)).sum();
        self.metric.eval_matrices(self.target, &out.hermitian_part())
    }
}

/// Stiefel chart around a fixed dilation unitary `V₀`.
struct Chart {
    d: usize,
    ancilla: usize,
    v0: ComplexMatrix,
    /// Input indices `x·ancilla` first, then the rest.
    order: Vec<usize>,
}

impl Chart {
    fn new(d: usize, ancilla: usize, v0: ComplexMatrix) -> Self {
        let inputs = (0..d).map(|x| x * ancilla);
        let rest = (0..d * ancilla).filter(|r| r % ancilla != 0);
        Self {
            d,
            ancilla,
            v0,
            order: inputs.chain(rest).collect(),
        }
    }

    /// Dilation unitary of a Kraus list with at most `ancilla` operators.
    fn from_kraus(kraus: &[ComplexMatrix], ancilla: usize) -> Self {
        let d = kraus[0].cols();
        let n = d * ancilla;
        let columns: Vec<Vec<C64>> = (0..d)
            .map(|x| {
                let mut col = vec![ZERO; n];
                for (m, k) in kraus.iter().enumerate() {
                    for a in 0..d {
                        col[a * ancilla + m] = k[(a, x)];
                    }
                }
                col
            })
            .collect();
        let full = complete_orthonormal(&columns, n);
        let mut v0 = ComplexMatrix::zeros(n, n);
        let mut extra = d;
        for r in 0..n {
            let source = if r % ancilla == 0 {
                r / ancilla
            } else {
                extra += 1;
                extra - 1
            };
            v0.set_column(r, &full[source]);
        }
        Self::new(d, ancilla, v0)
    }

    fn parameter_count(&self) -> usize {
        let (k, n) = (self.d, self.d * self.ancilla);
        k * k + 2 * k * (n - k)
    }

    fn kraus(&self, x: &[f64]) -> Vec<ComplexMatrix> {
        let (k, n) = (self.d, self.d * self.ancilla);
        // H = −iA = [[S, iB†], [−iB, 0]] in the reordered indices
        let mut h = ComplexMatrix::zeros(n, n);
        let mut p = 0;
        for i in 0..k {
            h[(i, i)] = C64::new(x[p], 0.0);
            p += 1;
            for j in i + 1..k {
                let z = C64::new(x[p], x[p + 1]);
                p += 2;
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        let i_unit = C64::new(0.0, 1.0);
        for r in k..n {
            for c in 0..k {
                let b = C64::new(x[p], x[p + 1]);
                p += 2;
                h[(r, c)] = -i_unit * b;
                h[(c, r)] = i_unit * b.conj();
            }
        }
        let e = expi_hermitian(&h).expect("Hermitian by construction");
        let w = ComplexMatrix::from_fn(n, k, |row, col| {
            (0..n)
                .map(|q| self.v0[(row, self.order[q])] * e[(q, col)])
                .sum()
        });
        (0..self.ancilla)
            .map(|m| ComplexMatrix::from_fn(self.d, self.d, |a, col| w[(a * self.ancilla + m, col)]))
            .collect()
    }
}

fn is_zero_params(x: &[f64]) -> bool {
    x.iter().all(|&v| v == 0.0)
}

/// Minimises `D(target, (R ⊗ id)(input))` over channels `R` on the first
/// factor. `candidates[0]` seeds the first descent.
fn optimize(
    problem: &Problem,
    candidates: &[KrausChannel],
    budget: &RecoveryBudget,
) -> Result<(f64, KrausChannel)> {
    let d = problem.dims.0;
    let ancilla = budget.ancilla_dim.unwrap_or(d * d).max(1);
    let mut best_value = f64::INFINITY;
    let mut best_channel = candidates[0].clone();
    for c in candidates {
        let v = problem.evaluate(c.kraus());
        if v < best_value {
            best_value = v;
            best_channel = c.clone();
        }
    }

    let mut sampler = Sampler::new(budget.seed);
    for restart in 0..budget.restarts {
        if best_value <= EXACT_RECOVERY {
            break;
        }
        let (chart, step) = if restart == 0 {
            let seed = &candidates[0];
            let kraus = if seed.len() <= ancilla {
                seed.kraus().to_vec()
            } else {
                seed.minimal_kraus().kraus().to_vec()
            };
            if kraus.len() > ancilla {
                continue;
            }
            (Chart::from_kraus(&kraus, ancilla), 0.05)
        } else {
            (Chart::new(d, ancilla, sampler.unitary(d * ancilla)), 0.3)
        };
        let nm = NelderMead {
            max_iters: budget.max_iters,
            initial_step: step,
            ftol: 1e-13,
        };
        let x0 = vec![0.0; chart.parameter_count()];
        let m = nm.minimize(|x| problem.evaluate(&chart.kraus(x)), &x0);
        if m.value < best_value {
            best_value = m.value;
            let kraus = chart.kraus(&m.x);
            best_channel = if is_zero_params(&m.x) && restart == 0 {
                candidates[0].clone()
            } else {
                KrausChannel::new(d, d, kraus)?
            };
        }
    }
    Ok((best_value.max(0.0), best_channel))
}

/// Recoverability of `ρ` after local dephasing of A.
pub fn recoverability(
    rho: &BipartiteState,
    b: &Basis,
    metric: Metric,
    budget: &RecoveryBudget,
) -> Result<Recoverability> {
    recoverability_with_candidates(rho, b, metric, budget, &[])
}

/// As [`recoverability`], additionally evaluating the given channels on A.
pub fn recoverability_with_candidates(
    rho: &BipartiteState,
    b: &Basis,
    metric: Metric,
    budget: &RecoveryBudget,
    extra: &[KrausChannel],
) -> Result<Recoverability> {
    check_basis(rho, b)?;
    let dims = rho.dims();
    let target = rho.matrix();
    let input = dephase_a_matrix(target, dims, b);
    let rho_a = partial_trace_matrix(target, dims, Side::B)?;
    let petz = petz_channel(&rho_a, b)?;
    let problem = Problem {
        target,
        input: &input,
        dims,
        metric,
    };
    let petz_value = problem.evaluate(petz.kraus()).max(0.0);
    let mut candidates = vec![petz];
    candidates.extend(extra.iter().cloned());
    let (value, channel) = optimize(&problem, &candidates, budget)?;
    Ok(Recoverability {
        value: value.min(petz_value),
        petz_value,
        best: RecoveryChannel { channel },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MemoryTrial {
    /// `Δ_D(B|A)` of the input.
    pub before: f64,
    /// `Δ_D(B|XA)` after the channel with memory.
    pub after: f64,
    pub pass: bool,
}

/// `T_µ = Σ_i |i⟩⟨µ, π_µ(i)|`: undoes the outcome permutation and forgets `µ`.
fn unpermute_channel(e: &KrausChannel, b: &Basis) -> Result<KrausChannel> {
    let report = classify_channel(e, b, None, DEFAULT_TOL)?;
    if !report.strictly_incoherent {
        return Err(Error::NotStrictlyIncoherent {
            violation: report.si_violation,
        });
    }
    let d = b.dim();
    let n = e.len();
    let kraus = report
        .kraus_forms
        .iter()
        .enumerate()
        .map(|(mu, form)| {
            let pi = form.permutation.as_ref().expect("SI forms carry a permutation");
            let local = ComplexMatrix::from_fn(d, d, |i, x| if pi[i] == x { ONE } else { ZERO });
            let v_dag = b.from_basis(&local);
            let mut t = ComplexMatrix::zeros(d, n * d);
            for r in 0..d {
                for c in 0..d {
                    t[(r, mu * d + c)] = v_dag[(r, c)];
                }
            }
            t
        })
        .collect();
    KrausChannel::new(n * d, d, kraus)
}

/// Compares `Δ_D(B|A)_ρ` with `Δ_D(B|XA)` of `ρ' = (F ⊗ id)(ρ)` where `F`
/// keeps the outcome of the SI channel `e` in a memory `X`.
///
/// `ρ'` is classical on `X`, so dephasing `A` alone coincides with dephasing
/// `XA` in the product basis. The composite `F ∘ R* ∘ T`, with `R*` the best
/// recovery found for `ρ`, is offered as a candidate for the memory problem;
/// by contractivity it does no worse than `R*` did on `ρ`.
pub fn memory_monotonicity_trial(
    rho: &BipartiteState,
    e: &KrausChannel,
    b: &Basis,
    metric: Metric,
    before_budget: &RecoveryBudget,
    after_budget: &RecoveryBudget,
) -> Result<MemoryTrial> {
    check_basis(rho, b)?;
    e.require_trace_preserving()?;
    let before = recoverability(rho, b, metric, before_budget)?;

    let memory = e.with_memory()?;
    let n = e.len();
    let after_state = memory.local_apply(rho, Side::A)?;
    let xa_basis =
        Basis::from_unitary_unchecked(ComplexMatrix::identity(n).kron(b.unitary()));
    let candidate = unpermute_channel(e, b)?
        .then(&before.best.channel)?
        .then(&memory)?;
    let after = recoverability_with_candidates(
        &after_state,
        &xa_basis,
        metric,
        after_budget,
        &[candidate],
    )?;
    Ok(MemoryTrial {
        before: before.value,
        after: after.value,
        pass: after.value <= before.value + MEMORY_SLACK,
    })
}
