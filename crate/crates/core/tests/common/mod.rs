#![allow(dead_code)]

use coherence_kit::channels::KrausChannel;
use coherence_kit::linalg::matrix::ComplexMatrix;
use coherence_kit::linalg::random::Sampler;

/// CPTP channel from the first `d` columns of a Haar unitary on `C^{n·d}`.
pub fn random_channel(s: &mut Sampler, d: usize, n: usize) -> KrausChannel {
    let u = s.unitary(n * d);
    let kraus = (0..n)
        .map(|m| ComplexMatrix::from_fn(d, d, |a, x| u[(m * d + a, x)]))
        .collect();
    KrausChannel::new(d, d, kraus).unwrap()
}

pub fn random_hermitian(s: &mut Sampler, d: usize) -> ComplexMatrix {
    s.gaussian_matrix(d, d).hermitian_part()
}
