use entmon_core::levelset::{
    chart_entropy, gauss_ratio, lambda2_derivatives, solve_lambda2, LevelSetSlice, SlicePoint,
};
use entmon_core::sampling::{random_density, random_unitary};
use entmon_core::spectral::{
    build_chart, entropy_gradient, matrix_log, relative_entropy, von_neumann_entropy, DensityState,
    HermitianMatrix,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn state(d: usize, seed: u64) -> DensityState {
    random_density(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_unitarily_invariant(d in 2usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(d, &mut rng);
        let u = random_unitary(d, &mut rng);
        let s0 = von_neumann_entropy(&rho, std::f64::consts::E).unwrap();
        let s1 = von_neumann_entropy(&rho.conjugated_by(&u).unwrap(), std::f64::consts::E).unwrap();
        prop_assert!((s0 - s1).abs() < 1e-10);
    }

    #[test]
    fn relative_entropy_decomposes(d in 2usize..5, a in any::<u64>(), b in any::<u64>()) {
        let rho = state(d, a);
        let sigma = state(d, b);
        let cross = rho.matrix().inner(&matrix_log(&sigma).unwrap());
        let s = von_neumann_entropy(&rho, std::f64::consts::E).unwrap();
        let rel = relative_entropy(&rho, &sigma).unwrap();
        prop_assert!((rel - (-s - cross)).abs() < 1e-9);
        prop_assert!(rel >= -1e-12);
    }

    #[test]
    fn chart_is_full_rank(d in 2usize..5, seed in any::<u64>()) {
        let rep = build_chart(&state(d, seed)).unwrap();
        prop_assert!(rep.full_rank);
        prop_assert_eq!(rep.derivative_rank, d);
        prop_assert_eq!(rep.deleted_coordinates.len(), d);
    }

    #[test]
    fn chart_entropy_permutation_symmetric(a in 0.01f64..0.3, b in 0.01f64..0.3, c in 0.01f64..0.3) {
        let f = chart_entropy(&[a, b, c]).unwrap();
        let rest = 1.0 - a - b - c;
        for p in [[b, a, c], [c, b, a], [a, c, rest], [rest, b, c]] {
            prop_assert!((chart_entropy(&p).unwrap() - f).abs() < 1e-12);
        }
    }

    #[test]
    fn solved_points_lie_on_level(t in 0.05f64..0.95) {
        let slice = LevelSetSlice::through(4, vec![0.15], 0.2, 0.3).unwrap();
        let (lo, hi) = slice.ordered_interval().unwrap();
        let l1 = lo + t * (hi - lo);
        let l2 = slice.lower_branch_lambda2(l1).unwrap();
        prop_assert!(slice.residual(l1, l2).abs() < 1e-12);
        let l2b = solve_lambda2(l1, &slice, l2).unwrap();
        prop_assert!((l2 - l2b).abs() < 1e-12);
    }

    #[test]
    fn slope_is_minus_gauss_ratio(t in 0.05f64..0.95) {
        let slice = LevelSetSlice::through(3, vec![], 0.2, 0.3).unwrap();
        let (lo, hi) = slice.ordered_interval().unwrap();
        let l1 = lo + t * (hi - lo);
        let l2 = slice.lower_branch_lambda2(l1).unwrap();
        let der = lambda2_derivatives(&SlicePoint::new(&slice, l1, l2).unwrap(), &slice).unwrap();
        prop_assert!((der.slope + gauss_ratio(&[l1, l2]).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn gradient_matches_directional_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let d = 2 + i % 3;
        let rho = random_density(d, &mut rng);
        let g = entropy_gradient(&rho).unwrap();
        let dir = entmon_core::sampling::random_traceless_hermitian(d, &mut rng);
        let dir = dir.scale(1.0 / dir.frobenius_norm());
        let h = 1e-6;
        let s = |m: HermitianMatrix| von_neumann_entropy(&DensityState::new(m).unwrap(), std::f64::consts::E).unwrap();
        let fd = (s(rho.matrix().add(&dir.scale(h))) - s(rho.matrix().sub(&dir.scale(h)))) / (2.0 * h);
        assert!((fd - g.inner(&dir)).abs() < 1e-6, "sample {i}: fd {fd} vs {}", g.inner(&dir));
    }
}
