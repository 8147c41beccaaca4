//! Dense complex linear algebra, spectral routines and information functionals.

pub mod basis;
pub mod eig;
pub mod info;
pub mod matrix;
pub mod random;
pub mod state;

pub use basis::Basis;
pub use eig::{eig_hermitian, matrix_function, MatrixFunction, Spectrum};
pub use info::{
    distance, entropy, fidelity, relative_entropy, shannon_entropy, trace_distance, trace_norm,
    Metric,
};
pub use matrix::{ComplexMatrix, C64};
pub use random::Sampler;
pub use state::{partial_trace, BipartiteState, DensityMatrix, Side};
