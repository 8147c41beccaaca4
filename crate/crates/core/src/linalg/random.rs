//! Seeded samplers for states, unitaries and bases.
//!
//! Every sampler is a ChaCha20 stream keyed by a seed; independent trials use
//! separate streams of the same key, so trial `t` of seed `s` is reproducible
//! regardless of how many other trials ran before it or on which thread.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::linalg::basis::Basis;
use crate::linalg::matrix::{inner, norm, ComplexMatrix, C64};
use crate::linalg::state::DensityMatrix;

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha20Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for trial `trial` under `seed`.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        Self { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha20Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut self.rng);
        p
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Standard complex Gaussian, `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> C64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        C64::new(self.normal() * s, self.normal() * s)
    }

    pub fn gaussian_vector(&mut self, n: usize) -> Vec<C64> {
        (0..n).map(|_| self.complex_normal()).collect()
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    /// Uniformly random unit vector.
    pub fn pure_vector(&mut self, d: usize) -> Vec<C64> {
        let v = self.gaussian_vector(d);
        let n = norm(&v);
        v.into_iter().map(|x| x / n).collect()
    }

    pub fn pure_state(&mut self, d: usize) -> DensityMatrix {
        DensityMatrix::from_pure(&self.pure_vector(d))
    }

    /// `GG† / tr(GG†)` with `G` a `d × d` Gaussian matrix (full rank almost surely).
    pub fn density_matrix(&mut self, d: usize) -> DensityMatrix {
        self.density_matrix_of_rank(d, d)
    }

    /// `GG† / tr(GG†)` with `G` a `d × rank` Gaussian matrix.
    pub fn density_matrix_of_rank(&mut self, d: usize, rank: usize) -> DensityMatrix {
        let g = self.gaussian_matrix(d, rank.max(1));
        let m = g.matmul(&g.adjoint());
        let tr = m.trace().re;
        DensityMatrix::from_matrix_unchecked(m.scale_real(1.0 / tr))
    }

    /// Haar-distributed unitary: Gram–Schmidt on a Gaussian matrix, which fixes
    /// the phases of the triangular factor to be positive real.
    pub fn unitary(&mut self, d: usize) -> ComplexMatrix {
        let g = self.gaussian_matrix(d, d);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
        for j in 0..d {
            let mut v = g.column(j);
            for _ in 0..2 {
                for u in &cols {
                    let c = inner(u, &v);
                    for (x, &y) in v.iter_mut().zip(u) {
                        *x -= c * y;
                    }
                }
            }
            let n = norm(&v);
            cols.push(v.into_iter().map(|x| x / n).collect());
        }
        ComplexMatrix::from_columns(&cols)
    }

    pub fn basis(&mut self, d: usize) -> Basis {
        Basis::from_unitary_unchecked(self.unitary(d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut s = Sampler::new(1);
        let u = s.unitary(2);
        assert!(u.unitarity_deviation() < 1e-12);
        for d in 2..=6 {
            assert!(s.unitary(d).unitarity_deviation() < 1e-12);
        }
    }

    #[test]
    fn density_matrix_is_valid() {
        let mut s = Sampler::new(1);
        let rho = s.density_matrix(3);
        assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn same_seed_is_bitwise_identical() {
        let a = Sampler::new(42).unitary(3);
        let b = Sampler::new(42).unitary(3);
        assert_eq!(a.as_slice(), b.as_slice());
        let a = Sampler::for_trial(42, 7).density_matrix(4);
        let b = Sampler::for_trial(42, 7).density_matrix(4);
        assert_eq!(a.matrix().as_slice(), b.matrix().as_slice());
    }

    #[test]
    fn trial_streams_differ() {
        let a = Sampler::for_trial(5, 0).unitary(2);
        let b = Sampler::for_trial(5, 1).unitary(2);
        assert!(a.max_abs_diff(&b) > 1e-3);
    }
}
