use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use usdkit::numkernel::{
    hermitian_eig, inverse, numerical_rank, psd_sqrt, random, svd, ComplexMatrix, C64,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn svd_reconstructs_square_matrices(n in 2usize..=8, seed in any::<u64>()) {
        let m = random::gaussian_matrix(&mut rng(seed), n, n);
        let f = svd(&m).unwrap();
        let err = (&f.reconstruct() - &m).frobenius_norm() / m.frobenius_norm();
        prop_assert!(err <= 1e-10, "relative error {err}");
        prop_assert!(f.left_vectors.unitarity_residual() < 1e-10);
        prop_assert!(f.right_vectors.unitarity_residual() < 1e-10);
        prop_assert!(f.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn svd_reconstructs_rectangular_matrices(
        rows in 1usize..=6,
        cols in 1usize..=6,
        seed in any::<u64>(),
    ) {
        let m = random::gaussian_matrix(&mut rng(seed), rows, cols);
        let f = svd(&m).unwrap();
        prop_assert_eq!(f.singular_values.len(), rows.min(cols));
        let err = (&f.reconstruct() - &m).frobenius_norm() / m.frobenius_norm();
        prop_assert!(err <= 1e-10);
    }

    #[test]
    fn right_vectors_follow_the_gauge(n in 2usize..=6, seed in any::<u64>()) {
        let m = random::gaussian_matrix(&mut rng(seed), n, n);
        let f = svd(&m).unwrap();
        for i in 0..n {
            let v = f.right(i);
            let pivot = v
                .iter()
                .copied()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap();
            prop_assert!(pivot.re > 0.0 && pivot.im.abs() < 1e-12 * pivot.re);
        }
    }

    #[test]
    fn prescribed_singular_values_are_recovered(n in 2usize..=6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let s: Vec<f64> = (0..n).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let m = random::with_singular_values(&mut r, &s);
        let f = svd(&m).unwrap();
        for (a, b) in f.singular_values.iter().zip(&s) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn hermitian_eig_diagonalizes(n in 1usize..=7, seed in any::<u64>()) {
        let g = random::gaussian_matrix(&mut rng(seed), n, n);
        let h = &g + &g.adjoint();
        let e = hermitian_eig(&h).unwrap();
        let back = e.map_spectrum(|x| x);
        prop_assert!(back.max_abs_diff(&h) < 1e-10 * h.max_abs().max(1.0));
        prop_assert!(e.eigenvectors.unitarity_residual() < 1e-10);
    }

    #[test]
    fn psd_sqrt_squares_back(n in 1usize..=6, seed in any::<u64>()) {
        let rho = random::density_matrix(&mut rng(seed), n);
        let r = psd_sqrt(&rho).unwrap();
        prop_assert!((&r * &r).max_abs_diff(&rho) < 1e-10);
    }

    #[test]
    fn inverse_is_two_sided(n in 1usize..=6, seed in any::<u64>()) {
        let m = random::gaussian_matrix(&mut rng(seed), n, n);
        let inv = inverse(&m).unwrap();
        let id = ComplexMatrix::identity(n);
        prop_assert!((&m * &inv).max_abs_diff(&id) < 1e-9);
        prop_assert!((&inv * &m).max_abs_diff(&id) < 1e-9);
    }
}

#[test]
fn rank_of_outer_product_is_one() {
    let v = vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.0), C64::new(0.0, 1.0)];
    let col = ComplexMatrix::from_columns(&[v]);
    let outer = &col * &col.adjoint();
    assert_eq!(numerical_rank(&outer, 1e-10).unwrap(), 1);
}

#[test]
fn random_unitaries_are_unitary() {
    let mut r = rng(5);
    for n in 1..=8 {
        assert!(random::unitary(&mut r, n).is_unitary(1e-12));
    }
}

#[test]
fn passive_generator_hits_target_norm() {
    let mut r = rng(6);
    let m = random::passive(&mut r, 4, 0.9);
    assert!((svd(&m).unwrap().s_max() - 0.9).abs() < 1e-12);
}
