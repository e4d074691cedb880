use ewc_core::linalg::random::{random_density, random_hermitian};
use ewc_core::linalg::{eig_hermitian, expectation, DensityMatrix, Operator};
use ewc_core::seed::rng_from_seed;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_of_product(seed in any::<u64>(), na in 1usize..3, nb in 1usize..3) {
        let mut rng = rng_from_seed(seed);
        let a = random_hermitian(na, &mut rng);
        let b = random_hermitian(nb, &mut rng);
        let keep: Vec<usize> = (0..na).collect();
        let reduced = a.kron(&b).partial_trace(&keep).unwrap();
        let want = a.scale_complex(b.trace());
        prop_assert!(reduced.max_abs_diff(&want) < 1e-10);
    }

    #[test]
    fn expectation_matches_spectral_sum(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = rng_from_seed(seed);
        let h = random_hermitian(n, &mut rng);
        let rho = DensityMatrix::new(random_density(n, &mut rng)).unwrap();
        let eig = eig_hermitian(&h).unwrap();
        let spectral: f64 = (0..h.dim())
            .map(|k| {
                let e = eig.vector(k);
                eig.values[k] * rho.as_operator().sandwich(&e, &e).unwrap().re
            })
            .sum();
        prop_assert!((expectation(&h, &rho).unwrap() - spectral).abs() < 1e-10);
    }
}

#[test]
fn eigendecomposition_contract() {
    let mut rng = rng_from_seed(17);
    for n in [1usize, 2, 3, 4, 6] {
        for _ in 0..100 {
            let h = random_hermitian(n, &mut rng);
            let eig = eig_hermitian(&h).unwrap();
            assert!(
                eig.reconstruct().max_abs_diff(&h) < 1e-10,
                "dim {}",
                h.dim()
            );
            assert!(eig.vectors.unitarity_deviation() < 1e-10);
            assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}

#[test]
fn identity_has_flat_spectrum() {
    let eig = eig_hermitian(&Operator::identity(3)).unwrap();
    assert!(eig.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));
}
