//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Each rotation zeroes one off-diagonal pair `(p, q)`. With `a_pq = |a_pq| e^{iφ}`
//! the rotation acting on the `(p, q)` plane is
//!
//! ```text
//!     [  c          s e^{iφ} ]
//!     [ -s e^{-iφ}  c        ]
//! ```
//!
//! where `t = s / c` is the smaller root of `t² + 2τt − 1 = 0`,
//! `τ = (a_qq − a_pp) / (2|a_pq|)`. Sweeps repeat until the off-diagonal
//! Frobenius norm falls under [`OFF_DIAGONAL_TOL`].

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, C64, ZERO};

pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
pub const HERMITIAN_INPUT_TOL: f64 = 1e-8;
/// Eigenvalues at or below this are treated as outside the support.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Most negative eigenvalue tolerated by the PSD matrix functions.
pub const NEGATIVE_EIGENVALUE_TOL: f64 = 1e-8;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = ZERO;
            for k in 0..n {
                if fl[k] != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * fl[k];
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(jacobi(m.hermitian_part()))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(mut a: ComplexMatrix) -> Spectrum {
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(1.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < OFF_DIAGONAL_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G_pq = s e^{iφ}, G_qp = −s e^{−iφ}
                let g_pq = phase * s;
                let g_qp = -phase.conj() * s;

                // a ← a G
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * c;
                }
                // a ← G† a
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * g_qp.conj();
                    a[(q, k)] = apk * g_pq.conj() + aqk * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

/// Scalar functions applied to PSD matrices through their eigenbasis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFunction {
    Sqrt,
    Log2,
    InvSqrt,
}

/// Applies `f` to the eigenvalues of a Hermitian PSD matrix.
///
/// `Log2` and `InvSqrt` act on the support only (eigenvalues above
/// [`SUPPORT_CUTOFF`]) and are zero on the kernel.
pub fn matrix_function(m: &ComplexMatrix, f: MatrixFunction) -> Result<ComplexMatrix> {
    let spec = eig_hermitian(m)?;
    matrix_function_of(&spec, f)
}

pub fn matrix_function_of(spec: &Spectrum, f: MatrixFunction) -> Result<ComplexMatrix> {
    if let Some(&min) = spec.eigenvalues.last() {
        if min < -NEGATIVE_EIGENVALUE_TOL {
            return Err(Error::NegativeEigenvalue { value: min });
        }
    }
    Ok(match f {
        // Eigenvalues at rounding level are zeroed so that sqrt(0) stays 0
        // rather than picking up sqrt(1e-17) noise.
        MatrixFunction::Sqrt => spec.reconstruct_with(|l| if l > 1e-15 { l.sqrt() } else { 0.0 }),
        MatrixFunction::Log2 => {
            spec.reconstruct_with(|l| if l > SUPPORT_CUTOFF { l.log2() } else { 0.0 })
        }
        MatrixFunction::InvSqrt => spec.reconstruct_with(|l| {
            if l > SUPPORT_CUTOFF {
                1.0 / l.sqrt()
            } else {
                0.0
            }
        }),
    })
}

/// `exp(iH)` for Hermitian `H`.
pub fn expi_hermitian(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = eig_hermitian(h)?;
    let n = spec.dim();
    let v = &spec.eigenvectors;
    let phases: Vec<C64> = spec
        .eigenvalues
        .iter()
        .map(|&l| C64::from_polar(1.0, l))
        .collect();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| v[(i, k)] * phases[k] * v[(j, k)].conj()).sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::Sampler;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let s = eig_hermitian(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn pauli_x_eigenpairs() {
        let s = eig_hermitian(&pauli_x()).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-14);
        let h = 0.5_f64.sqrt();
        let plus = s.eigenvector(0);
        // |+⟩ up to a global phase
        let overlap = (plus[0] * h + plus[1] * h).norm();
        assert!((overlap - 1.0).abs() < 1e-12);
        let minus = s.eigenvector(1);
        let overlap = (minus[0] * h - minus[1] * h).norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn marginal_of_mixed_example_spectrum() {
        // Characteristic polynomial of [[1/4,1/8,1/8],[1/8,3/8,0],[1/8,0,3/8]]:
        // (3/8 − λ)[(1/4 − λ)(3/8 − λ) − 2/64] = 0 → λ ∈ {3/8, 1/2, 1/8}.
        let m = ComplexMatrix::from_real_rows(&[
            &[0.25, 0.125, 0.125],
            &[0.125, 0.375, 0.0],
            &[0.125, 0.0, 0.375],
        ]);
        let s = eig_hermitian(&m).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([0.5, 0.375, 0.125]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn complex_hermitian_reconstruction() {
        let mut sampler = Sampler::new(11);
        for d in 2..=6 {
            let g = sampler.gaussian_matrix(d, d);
            let h = (&g + &g.adjoint()).scale_real(0.5);
            let s = eig_hermitian(&h).unwrap();
            assert!(s.eigenvectors.unitarity_deviation() < 1e-9);
            assert!(s.reconstruct().max_abs_diff(&h) < 1e-9);
            assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_of_diagonal() {
        let m = ComplexMatrix::from_real_diag(&[4.0, 9.0]);
        let r = matrix_function(&m, MatrixFunction::Sqrt).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_real_diag(&[2.0, 3.0])) < 1e-14);
    }

    #[test]
    fn inv_sqrt_is_zero_off_support() {
        let m = ComplexMatrix::from_real_diag(&[4.0, 0.0]);
        let r = matrix_function(&m, MatrixFunction::InvSqrt).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_real_diag(&[0.5, 0.0])) < 1e-14);
    }

    #[test]
    fn sqrt_of_pure_projector_is_itself() {
        let h = C64::new(0.5_f64.sqrt(), 0.0);
        let plus = ComplexMatrix::projector(&[h, h]);
        let r = matrix_function(&plus, MatrixFunction::Sqrt).unwrap();
        assert!(r.max_abs_diff(&plus) < 1e-12);
    }

    #[test]
    fn negative_eigenvalue_rejected() {
        let m = ComplexMatrix::from_real_diag(&[1.0, -1e-6]);
        assert!(matches!(
            matrix_function(&m, MatrixFunction::Sqrt),
            Err(Error::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn expi_is_unitary() {
        let mut sampler = Sampler::new(3);
        let g = sampler.gaussian_matrix(4, 4);
        let h = (&g + &g.adjoint()).scale_real(0.5);
        let u = expi_hermitian(&h).unwrap();
        assert!(u.unitarity_deviation() < 1e-12);
        let z = expi_hermitian(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert!(z.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }
}
