use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, C64};

pub const UNITARY_TOL: f64 = 1e-10;

/// An incoherent basis: the columns of a unitary matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    columns: ComplexMatrix,
}

impl Basis {
    pub fn new(columns: ComplexMatrix) -> Result<Self> {
        if !columns.is_square() {
            return Err(Error::NotSquare {
                rows: columns.rows(),
                cols: columns.cols(),
            });
        }
        let deviation = columns.unitarity_deviation();
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { columns })
    }

    pub(crate) fn from_unitary_unchecked(columns: ComplexMatrix) -> Self {
        Self { columns }
    }

    pub fn computational(d: usize) -> Self {
        Self {
            columns: ComplexMatrix::identity(d),
        }
    }

    /// Fourier basis `|k⟩ ↦ Σ_j ω^{jk}|j⟩/√d`; for `d = 2` this is `{|+⟩, |−⟩}`.
    pub fn fourier(d: usize) -> Self {
        let s = 1.0 / (d as f64).sqrt();
        let w = 2.0 * std::f64::consts::PI / d as f64;
        Self {
            columns: ComplexMatrix::from_fn(d, d, |j, k| {
                C64::from_polar(s, w * ((j * k) % d) as f64)
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.columns.rows()
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.columns
    }

    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.columns.column(i)
    }

    pub fn is_computational(&self) -> bool {
        self.columns == ComplexMatrix::identity(self.dim())
    }

    /// Coordinates of an operator in this basis: `U† M U`.
    pub fn to_basis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        if self.is_computational() {
            return m.clone();
        }
        self.columns.adjoint().matmul(m).matmul(&self.columns)
    }

    /// Inverse of [`Basis::to_basis`]: `U M U†`.
    pub fn from_basis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        if self.is_computational() {
            return m.clone();
        }
        self.columns.conjugate(m)
    }

    /// `Σ_i ⟨i|M|i⟩ |i⟩⟨i|` in this basis.
    pub fn dephase_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let local = self.to_basis(m);
        self.from_basis(&ComplexMatrix::from_diag(&local.diagonal()))
    }

    /// Basis state projector `|i⟩⟨i|` in computational coordinates.
    pub fn projector(&self, i: usize) -> ComplexMatrix {
        ComplexMatrix::projector(&self.vector(i))
    }

    /// Matrix unit `|i⟩⟨j|` of this basis, in computational coordinates.
    pub fn unit(&self, i: usize, j: usize) -> ComplexMatrix {
        ComplexMatrix::outer(&self.vector(i), &self.vector(j))
    }
}

#[derive(Serialize, Deserialize)]
struct BasisFile {
    dim: usize,
    columns: ComplexMatrix,
}

impl Serialize for Basis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BasisFile {
            dim: self.dim(),
            columns: self.columns.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Basis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let file = BasisFile::deserialize(d)?;
        if file.columns.rows() != file.dim {
            return Err(D::Error::custom(format!(
                "basis dim {} does not match a {}-row matrix",
                file.dim,
                file.columns.rows()
            )));
        }
        Basis::new(file.columns).map_err(D::Error::custom)
    }
}
