//! Structural classification of Kraus operators and channels in a basis.

use serde::Serialize;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::basis::Basis;
use crate::linalg::matrix::{ComplexMatrix, C64, ZERO};
use crate::linalg::state::DensityMatrix;

/// Structural tolerance, relative to the largest entry of a Kraus operator.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Tolerance on observable eigenvalue differences in the covariance test.
pub const SHIFT_TOL: f64 = 1e-8;

/// `Φ(ρ) = Σ_i ⟨i|ρ|i⟩ |i⟩⟨i|` in basis `b`.
pub fn dephase(rho: &DensityMatrix, b: &Basis) -> Result<DensityMatrix> {
    if rho.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            found: rho.dim(),
        });
    }
    Ok(DensityMatrix::from_matrix_unchecked(
        b.dephase_matrix(rho.matrix()),
    ))
}

/// A Kraus operator read as `K = Σ_i c_i |f(i)⟩⟨i|` in basis coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KrausSymbolicForm {
    pub incoherent: bool,
    pub strictly_incoherent: bool,
    pub genuinely_incoherent: bool,
    /// `f(i)` for each column; `None` for zero columns or when a column has
    /// several entries.
    pub map: Vec<Option<usize>>,
    /// Completion of `f` to a permutation, present when the operator is SI.
    /// Zero columns take the unused rows in increasing order.
    pub permutation: Option<Vec<usize>>,
    /// `c_i = ⟨f(i)|K|i⟩`, zero for zero columns.
    pub coefficients: Vec<C64>,
    pub zero_columns: Vec<bool>,
    /// Second-largest column entry over the largest entry.
    pub incoherent_violation: f64,
    /// As above, also over rows.
    pub si_violation: f64,
    /// Largest off-diagonal entry over the largest entry.
    pub gi_violation: f64,
}

/// Largest and second-largest magnitudes with the location of the largest.
fn top_two(values: impl Iterator<Item = (usize, f64)>) -> (Option<usize>, f64, f64) {
    let (mut arg, mut first, mut second) = (None, 0.0_f64, 0.0_f64);
    for (i, v) in values {
        if arg.is_none() || v > first {
            second = first;
            first = v;
            arg = Some(i);
        } else if v > second {
            second = v;
        }
    }
    (arg, first, second)
}

/// Classifies `k` (computational coordinates) in basis `b`.
pub fn classify_kraus(k: &ComplexMatrix, b: &Basis, tol: f64) -> Result<KrausSymbolicForm> {
    if !k.is_square() {
        return Err(Error::NotSquare {
            rows: k.rows(),
            cols: k.cols(),
        });
    }
    if k.rows() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            found: k.rows(),
        });
    }
    Ok(classify_local(&b.to_basis(k), tol))
}

/// Classification of a square matrix already in basis coordinates.
pub(crate) fn classify_local(k: &ComplexMatrix, tol: f64) -> KrausSymbolicForm {
    let d = k.rows();
    let scale = k.max_abs();
    let threshold = tol * scale;
    let rel = |v: f64| if scale > 0.0 { v / scale } else { 0.0 };

    let mut map = vec![None; d];
    let mut coefficients = vec![ZERO; d];
    let mut zero_columns = vec![false; d];
    let mut incoherent_violation = 0.0_f64;
    for j in 0..d {
        let (arg, first, second) = top_two((0..d).map(|i| (i, k[(i, j)].norm())));
        incoherent_violation = incoherent_violation.max(rel(second));
        if first <= threshold {
            zero_columns[j] = true;
        } else if second <= threshold {
            let i = arg.expect("non-empty column");
            map[j] = Some(i);
            coefficients[j] = k[(i, j)];
        }
    }
    let mut row_violation = 0.0_f64;
    for i in 0..d {
        let (_, _, second) = top_two((0..d).map(|j| (j, k[(i, j)].norm())));
        row_violation = row_violation.max(rel(second));
    }
    let mut gi_violation = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                gi_violation = gi_violation.max(rel(k[(i, j)].norm()));
            }
        }
    }

    let incoherent = incoherent_violation <= tol;
    let strictly_incoherent = incoherent && row_violation <= tol;
    let genuinely_incoherent = gi_violation <= tol;

    let permutation = strictly_incoherent.then(|| {
        let mut used = vec![false; d];
        for i in map.iter().flatten() {
            used[*i] = true;
        }
        let mut free = (0..d).filter(|&i| !used[i]);
        map.iter()
            .map(|f| f.unwrap_or_else(|| free.next().expect("subpermutation has free rows")))
            .collect()
    });

    KrausSymbolicForm {
        incoherent,
        strictly_incoherent,
        genuinely_incoherent,
        map,
        permutation,
        coefficients,
        zero_columns,
        incoherent_violation,
        si_violation: incoherent_violation.max(row_violation),
        gi_violation,
    }
}

/// Whether every nonzero entry `(i, j)` of each operator shifts the observable
/// eigenvalue by one common amount `a_i − a_j`.
pub(crate) fn covariance_local(
    kraus_local: &[ComplexMatrix],
    observable: &[f64],
    tol: f64,
) -> bool {
    kraus_local.iter().all(|k| {
        let threshold = tol * k.max_abs();
        let mut shift: Option<f64> = None;
        for i in 0..k.rows() {
            for j in 0..k.cols() {
                if k[(i, j)].norm() <= threshold {
                    continue;
                }
                let s = observable[i] - observable[j];
                match shift {
                    None => shift = Some(s),
                    Some(s0) if (s - s0).abs() > SHIFT_TOL => return false,
                    _ => {}
                }
            }
        }
        true
    })
}

/// `max ‖Φ(E(X)) − E(Φ(X))‖_max` over matrix units `X = |i⟩⟨j|` of basis `b`,
/// with Kraus operators given in basis coordinates.
pub(crate) fn dephasing_commutator_local(kraus_local: &[ComplexMatrix]) -> f64 {
    let d = kraus_local[0].cols();
    let dout = kraus_local[0].rows();
    let mut worst = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            let unit = ComplexMatrix::unit(d, i, j);
            let out: ComplexMatrix = kraus_local.iter().map(|k| k.conjugate(&unit)).sum();
            // Φ(E(X)) keeps the diagonal of E(X); E(Φ(X)) vanishes for i ≠ j.
            for r in 0..dout {
                for c in 0..dout {
                    let lhs = if r == c { out[(r, c)] } else { ZERO };
                    let rhs = if i == j { out[(r, c)] } else { ZERO };
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    worst
}

/// Largest off-diagonal entry of `E(|i⟩⟨i|)` over basis projectors.
pub(crate) fn incoherent_output_deviation_local(kraus_local: &[ComplexMatrix]) -> f64 {
    let d = kraus_local[0].cols();
    let mut worst = 0.0_f64;
    for i in 0..d {
        let unit = ComplexMatrix::unit(d, i, i);
        let out: ComplexMatrix = kraus_local.iter().map(|k| k.conjugate(&unit)).sum();
        for r in 0..out.rows() {
            for c in 0..out.cols() {
                if r != c {
                    worst = worst.max(out[(r, c)].norm());
                }
            }
        }
    }
    worst
}

/// Kraus operators of a square channel in the coordinates of `b`.
pub(crate) fn local_kraus(e: &KrausChannel, b: &Basis) -> Result<Vec<ComplexMatrix>> {
    if !e.is_square() {
        return Err(Error::DimensionMismatch {
            expected: e.dim_in(),
            found: e.dim_out(),
        });
    }
    if e.dim_in() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            found: e.dim_in(),
        });
    }
    Ok(e.kraus().iter().map(|k| b.to_basis(k)).collect())
}

/// `max ‖Φ∘E(X) − E∘Φ(X)‖_max` over the matrix units of `b`.
pub fn dephasing_commutator(e: &KrausChannel, b: &Basis) -> Result<f64> {
    Ok(dephasing_commutator_local(&local_kraus(e, b)?))
}

/// Largest coherence created from an incoherent input: off-diagonal magnitude
/// of `E(|i⟩⟨i|)` maximised over `i`.
pub fn incoherent_output_deviation(e: &KrausChannel, b: &Basis) -> Result<f64> {
    Ok(incoherent_output_deviation_local(&local_kraus(e, b)?))
}

/// Flags for one Kraus representation of a channel.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub incoherent: bool,
    pub strictly_incoherent: bool,
    pub genuinely_incoherent: bool,
    /// `None` when no observable was supplied.
    pub covariant: Option<bool>,
    pub commutes_with_dephasing: bool,
    pub trace_preserving: bool,
    pub incoherent_violation: f64,
    pub si_violation: f64,
    pub gi_violation: f64,
    pub dephasing_deviation: f64,
    #[serde(skip)]
    pub kraus_forms: Vec<KrausSymbolicForm>,
}

impl ClassificationReport {
    /// Largest structural violation across the three levels.
    pub fn max_violation(&self) -> f64 {
        self.incoherent_violation
            .max(self.si_violation)
            .max(self.gi_violation)
    }
}

/// Classifies the given Kraus representation of `e` in basis `b`.
///
/// `observable` lists the eigenvalues `a_i` of an observable diagonal in `b`
/// and enables the covariance check.
pub fn classify_channel(
    e: &KrausChannel,
    b: &Basis,
    observable: Option<&[f64]>,
    tol: f64,
) -> Result<ClassificationReport> {
    let local = local_kraus(e, b)?;
    let forms: Vec<KrausSymbolicForm> = local.iter().map(|k| classify_local(k, tol)).collect();
    let covariant = match observable {
        Some(obs) if obs.len() != b.dim() => {
            return Err(Error::DimensionMismatch {
                expected: b.dim(),
                found: obs.len(),
            })
        }
        Some(obs) => Some(covariance_local(&local, obs, tol)),
        None => None,
    };
    let dephasing_deviation = dephasing_commutator_local(&local);
    let fold = |f: fn(&KrausSymbolicForm) -> f64| forms.iter().map(f).fold(0.0, f64::max);
    let report = ClassificationReport {
        incoherent: forms.iter().all(|f| f.incoherent),
        strictly_incoherent: forms.iter().all(|f| f.strictly_incoherent),
        genuinely_incoherent: forms.iter().all(|f| f.genuinely_incoherent),
        covariant,
        commutes_with_dephasing: dephasing_deviation < tol,
        trace_preserving: e.is_trace_preserving(),
        incoherent_violation: fold(|f| f.incoherent_violation),
        si_violation: fold(|f| f.si_violation),
        gi_violation: fold(|f| f.gi_violation),
        dephasing_deviation,
        kraus_forms: forms,
    };
    debug_assert!(!report.genuinely_incoherent || report.strictly_incoherent);
    debug_assert!(!report.strictly_incoherent || report.incoherent);
    debug_assert!(
        report.covariant != Some(true)
            || !observable.is_some_and(is_nondegenerate)
            || report.strictly_incoherent
    );
    Ok(report)
}

fn is_nondegenerate(obs: &[f64]) -> bool {
    obs.iter()
        .enumerate()
        .all(|(i, a)| obs[i + 1..].iter().all(|b| (a - b).abs() > SHIFT_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::Sampler;

    fn h() -> f64 {
        0.5_f64.sqrt()
    }

    fn plus() -> DensityMatrix {
        DensityMatrix::from_pure(&[C64::new(h(), 0.0), C64::new(h(), 0.0)])
    }

    fn coherent_measurement() -> KrausChannel {
        let k0 = ComplexMatrix::from_real_rows(&[&[h(), h()], &[0.0, 0.0]]);
        let k1 = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[h(), -h()]]);
        KrausChannel::from_kraus(vec![k0, k1]).unwrap()
    }

    #[test]
    fn dephase_examples() {
        let z = Basis::computational(2);
        let out = dephase(&plus(), &z).unwrap();
        assert!(out.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
        let diag = DensityMatrix::diagonal(&[0.2, 0.3, 0.5]).unwrap();
        let out = dephase(&diag, &Basis::computational(3)).unwrap();
        assert_eq!(out.matrix(), diag.matrix());
        let out = dephase(&plus(), &Basis::fourier(2)).unwrap();
        assert!(out.matrix().max_abs_diff(plus().matrix()) < 1e-15);
    }

    #[test]
    fn kraus_examples() {
        let z = Basis::computational(2);
        let k0 = ComplexMatrix::from_real_rows(&[&[h(), h()], &[0.0, 0.0]]);
        let f = classify_kraus(&k0, &z, DEFAULT_TOL).unwrap();
        assert!(f.incoherent && !f.strictly_incoherent && !f.genuinely_incoherent);
        assert!((f.si_violation - 1.0).abs() < 1e-12);

        let diag = ComplexMatrix::from_diag(&[C64::new(0.3, 0.1), C64::new(-0.2, 0.0)]);
        let f = classify_kraus(&diag, &z, DEFAULT_TOL).unwrap();
        assert!(f.genuinely_incoherent && f.strictly_incoherent);
        assert_eq!(f.permutation, Some(vec![0, 1]));

        let k = ComplexMatrix::unit(2, 0, 1).scale_real(h());
        let f = classify_kraus(&k, &z, DEFAULT_TOL).unwrap();
        assert!(f.strictly_incoherent && !f.genuinely_incoherent);
        assert_eq!(f.permutation, Some(vec![1, 0]));
        assert_eq!(f.zero_columns, vec![true, false]);
        assert_eq!(f.coefficients[0], ZERO);
        assert!((f.coefficients[1].re - h()).abs() < 1e-15);
    }

    #[test]
    fn channel_examples() {
        let z = Basis::computational(2);
        let r = classify_channel(&coherent_measurement(), &z, None, DEFAULT_TOL).unwrap();
        assert!(r.incoherent && !r.strictly_incoherent && !r.commutes_with_dephasing);
        assert_eq!(r.covariant, None);

        // Levi–Mintert generators in d = 3
        let d = 3;
        let (u1, u2) = (C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        for i in 0..d {
            let a = ComplexMatrix::from_fn(d, d, |r, c| {
                if r != c {
                    ZERO
                } else if r == i {
                    u1
                } else {
                    u2
                }
            });
            let f = classify_kraus(&a, &Basis::computational(d), DEFAULT_TOL).unwrap();
            assert!(f.strictly_incoherent);
            for j in 0..d {
                let bji = ComplexMatrix::unit(d, j, i);
                let f = classify_kraus(&bji, &Basis::computational(d), DEFAULT_TOL).unwrap();
                assert!(f.strictly_incoherent);
            }
        }

        let k = ComplexMatrix::unit(2, 0, 1);
        let e = KrausChannel::from_kraus(vec![k, ComplexMatrix::unit(2, 1, 1).scale_real(0.0)])
            .unwrap();
        let r = classify_channel(&e, &z, Some(&[0.0, 1.0]), DEFAULT_TOL).unwrap();
        assert_eq!(r.covariant, Some(true));
        assert!(r.strictly_incoherent);
    }

    #[test]
    fn covariance_rejects_mixed_shifts() {
        let d = 3;
        let k = &ComplexMatrix::unit(d, 1, 0) + &ComplexMatrix::unit(d, 0, 2);
        let e = KrausChannel::from_kraus(vec![k.scale_real(h())]).unwrap();
        let r = classify_channel(&e, &Basis::computational(d), Some(&[0.0, 1.0, 2.0]), DEFAULT_TOL)
            .unwrap();
        assert_eq!(r.covariant, Some(false));
        assert!(r.strictly_incoherent);
    }

    #[test]
    fn classification_in_rotated_basis() {
        // dephasing in the {|±⟩} basis is GI there and not even incoherent in Z,
        // although the two dephasings commute (the bases are mutually unbiased)
        let x = Basis::fourier(2);
        let e = KrausChannel::from_kraus(vec![x.projector(0), x.projector(1)]).unwrap();
        let r = classify_channel(&e, &x, None, DEFAULT_TOL).unwrap();
        assert!(r.genuinely_incoherent && r.commutes_with_dephasing);
        let r = classify_channel(&e, &Basis::computational(2), None, DEFAULT_TOL).unwrap();
        assert!(!r.incoherent && r.commutes_with_dephasing);
    }

    #[test]
    fn global_phases_change_no_flag() {
        let mut s = Sampler::new(3);
        let z = Basis::computational(2);
        let e = coherent_measurement();
        let base = classify_channel(&e, &z, None, DEFAULT_TOL).unwrap();
        for _ in 0..20 {
            let kraus = e
                .kraus()
                .iter()
                .map(|k| k.scale(C64::from_polar(1.0, s.uniform_in(0.0, 6.3))))
                .collect();
            let r = classify_channel(&KrausChannel::from_kraus(kraus).unwrap(), &z, None, DEFAULT_TOL)
                .unwrap();
            assert_eq!(
                (r.incoherent, r.strictly_incoherent, r.genuinely_incoherent),
                (base.incoherent, base.strictly_incoherent, base.genuinely_incoherent)
            );
        }
    }

    #[test]
    fn zero_operator_is_trivially_diagonal() {
        let f = classify_local(&ComplexMatrix::zeros(3, 3), DEFAULT_TOL);
        assert!(f.genuinely_incoherent);
        assert_eq!(f.permutation, Some(vec![0, 1, 2]));
    }
}
