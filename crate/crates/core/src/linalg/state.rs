//! Density matrices and bipartite states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::eig::eig_hermitian;
use crate::linalg::matrix::{ComplexMatrix, C64, ZERO};

/// Validation tolerance for Hermiticity, trace and positivity.
pub const STATE_TOL: f64 = 1e-10;

/// Positive unit-trace Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > STATE_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::BadTrace { trace });
        }
        let spec = eig_hermitian(&matrix)?;
        if let Some(&min) = spec.eigenvalues.last() {
            if min < -STATE_TOL {
                return Err(Error::NegativeEigenvalue { value: min });
            }
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// Wraps a matrix already known to be a state up to rounding; only the
    /// Hermitian part is kept.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn from_pure(psi: &[C64]) -> Self {
        Self {
            matrix: ComplexMatrix::projector(psi),
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
        }
    }

    pub fn diagonal(probabilities: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diag(probabilities))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self {
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// Convex combination `Σ w_k ρ_k` (weights are not renormalised).
    pub fn mixture(terms: &[(f64, &DensityMatrix)]) -> Self {
        let m: ComplexMatrix = terms
            .iter()
            .map(|(w, rho)| rho.matrix.scale_real(*w))
            .sum();
        Self::from_matrix_unchecked(m)
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

impl Serialize for BipartiteState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BipartiteState", 2)?;
        st.serialize_field("dims", &[self.dim_a(), self.dim_b()])?;
        st.serialize_field("matrix", self.matrix())?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

/// Density matrix with a declared `(d_A, d_B)` factorisation.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    state: DensityMatrix,
}

impl BipartiteState {
    pub fn new(dim_a: usize, dim_b: usize, state: DensityMatrix) -> Result<Self> {
        if dim_a * dim_b != state.dim() {
            return Err(Error::DimensionMismatch {
                expected: dim_a * dim_b,
                found: state.dim(),
            });
        }
        Ok(Self {
            dim_a,
            dim_b,
            state,
        })
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        Self {
            dim_a: a.dim(),
            dim_b: b.dim(),
            state: a.tensor(b),
        }
    }

    pub(crate) fn from_matrix_unchecked(dim_a: usize, dim_b: usize, m: ComplexMatrix) -> Self {
        debug_assert_eq!(dim_a * dim_b, m.rows());
        Self {
            dim_a,
            dim_b,
            state: DensityMatrix::from_matrix_unchecked(m),
        }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }

    pub fn reduced(&self, keep: Side) -> DensityMatrix {
        partial_trace(self, keep.other())
    }

    /// `(d_B × d_B)` block `⟨i|ρ|j⟩_A`.
    pub fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        let db = self.dim_b;
        let m = self.matrix();
        ComplexMatrix::from_fn(db, db, |r, c| m[(i * db + r, j * db + c)])
    }

    /// Unnormalised conditional `⟨ψ|ρ|ψ⟩_A` for a vector on A.
    pub fn conditional_on(&self, psi: &[C64]) -> ComplexMatrix {
        let (da, db) = self.dims();
        let m = self.matrix();
        ComplexMatrix::from_fn(db, db, |r, c| {
            let mut acc = ZERO;
            for i in 0..da {
                if psi[i] == ZERO {
                    continue;
                }
                for j in 0..da {
                    acc += psi[i].conj() * psi[j] * m[(i * db + r, j * db + c)];
                }
            }
            acc
        })
    }
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Partial trace of a raw matrix on `C^{d_A} ⊗ C^{d_B}` over `traced`.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    dims: (usize, usize),
    traced: Side,
) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if m.rows() != da * db || !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            found: m.rows(),
        });
    }
    Ok(match traced {
        Side::B => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Side::A => ComplexMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
        }),
    })
}

/// Traces out `traced` and returns the state of the other side.
pub fn partial_trace(rho: &BipartiteState, traced: Side) -> DensityMatrix {
    let m = partial_trace_matrix(rho.matrix(), rho.dims(), traced)
        .expect("bipartite dims are validated at construction");
    DensityMatrix::from_matrix_unchecked(m)
}
