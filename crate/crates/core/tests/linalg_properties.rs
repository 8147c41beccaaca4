mod common;

use coherence_kit::linalg::eig::eig_hermitian;
use coherence_kit::linalg::info::{distance, entropy, fidelity, relative_entropy, trace_distance, Metric};
use coherence_kit::linalg::random::Sampler;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), d in 1usize..=6) {
        let m = common::random_hermitian(&mut Sampler::new(seed), d);
        let spec = eig_hermitian(&m).unwrap();
        prop_assert!(spec.reconstruct().max_abs_diff(&m) < 1e-9);
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn entropy_is_bounded(seed in any::<u64>(), d in 1usize..=6, rank in 1usize..=6) {
        let mut s = Sampler::new(seed);
        let rho = s.density_matrix_of_rank(d, rank.min(d));
        let h = entropy(&rho);
        prop_assert!(h >= -1e-12);
        prop_assert!(h <= (d as f64).log2() + 1e-12);
    }

    #[test]
    fn relative_entropy_is_nonnegative_and_faithful(seed in any::<u64>(), d in 2usize..=4) {
        let mut s = Sampler::new(seed);
        let rho = s.density_matrix(d);
        let sigma = s.density_matrix(d);
        let r = relative_entropy(&rho, &sigma);
        prop_assert!(r >= -1e-12);
        prop_assert_eq!(r > 1e-12, trace_distance(&rho, &sigma) >= 1e-8);
        prop_assert!(relative_entropy(&rho, &rho).abs() < 1e-9);
    }

    #[test]
    fn distances_contract_under_channels(seed in any::<u64>(), d in 2usize..=3, n in 1usize..=3) {
        let mut s = Sampler::new(seed);
        let e = common::random_channel(&mut s, d, n);
        let rho = s.density_matrix(d);
        let sigma = s.density_matrix(d);
        let (er, es) = (e.apply(&rho).unwrap(), e.apply(&sigma).unwrap());
        for m in Metric::ALL {
            let before = distance(m, &rho, &sigma).unwrap();
            let after = distance(m, &er, &es).unwrap();
            prop_assert!(after <= before + 1e-9, "{:?}: {} > {}", m, after, before);
        }
    }

    #[test]
    fn fidelity_is_symmetric(seed in any::<u64>(), d in 2usize..=5) {
        let mut s = Sampler::new(seed);
        let rank = 1 + s.index(d);
        let rho = s.density_matrix_of_rank(d, rank);
        let sigma = s.density_matrix(d);
        prop_assert!((fidelity(&rho, &sigma) - fidelity(&sigma, &rho)).abs() < 1e-9);
    }
}
