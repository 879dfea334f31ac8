mod common;

use blaschke::blaschke::{eval_affine, DEFAULT_INDET_TOL};
use blaschke::families::{equal_degree_default, random_generic_map, RandomZeros};
use blaschke::solver::{solve_system, solve_system_order, SolverConfig, Var};
use blaschke::topology::preimages_of_origin;
use blaschke::torus::torus_distance;
use common::{disc_point, nm};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn both_orders_agree_and_reproduce_target(seed in any::<u64>(), which in 0usize..3) {
        let n = [nm(1, 1, 1, 2), nm(2, 1, 1, 1), nm(2, 2, 1, 2)][which];
        let f = random_generic_map(n, seed, RandomZeros::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = (
            Complex64::from_polar(rng.random_range(0.1..0.9), rng.random_range(0.0..6.3)),
            Complex64::from_polar(rng.random_range(0.1..0.9), rng.random_range(0.0..6.3)),
        );
        let cfg = SolverConfig::default();
        let a = solve_system_order(&f, t, Var::W, &cfg).unwrap();
        let b = solve_system_order(&f, t, Var::Z, &cfg).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for &(z, w) in &a.points {
            let (x, y) = eval_affine(&f, z, w, DEFAULT_INDET_TOL).finite().unwrap();
            prop_assert!((x - t.0).norm().max((y - t.1).norm()) < 1e-8);
        }
    }

    #[test]
    fn planted_preimages_are_found(seed in any::<u64>()) {
        let f = random_generic_map(nm(1, 1, 1, 2), seed, RandomZeros::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let (z, w) = (disc_point(&mut rng, 9), disc_point(&mut rng, 9));
        let Some((x, y)) = f.eval_exact(&z, &w) else { return Ok(()) };
        let s = solve_system(&f, (x.to_c64(), y.to_c64()), &SolverConfig::default()).unwrap();
        let found = s.points.iter().any(|p| (p.0 - z.to_c64()).norm() < 1e-8 && (p.1 - w.to_c64()).norm() < 1e-8);
        prop_assert!(found, "({z}, {w}) missing from {:?}", s.points);
    }

    #[test]
    fn equal_degree_torus_preimages_stay_on_torus(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let f = equal_degree_default();
        let t = (Complex64::from_polar(1.0, 6.283185307179586 * a), Complex64::from_polar(1.0, 6.283185307179586 * b));
        let s = solve_system(&f, t, &SolverConfig::default()).unwrap();
        prop_assert_eq!(s.len(), 5);
        for &(z, w) in &s.points {
            prop_assert!(torus_distance(z, w) < 1e-8);
        }
    }
}

#[test]
fn origin_solutions_equal_exact_preimages() {
    for seed in 0..6 {
        let f = random_generic_map(nm(2, 1, 1, 2), seed, RandomZeros::default()).unwrap();
        let s = solve_system(&f, (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), &SolverConfig::default()).unwrap();
        let exact = preimages_of_origin(&f);
        assert_eq!(s.len(), exact.len());
        for (z, w) in exact {
            let (z, w) = (z.to_c64(), w.to_c64());
            let best = s.points.iter().map(|p| (p.0 - z).norm().max((p.1 - w).norm())).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12, "seed {seed}: ({z}, {w}) off by {best:e}; {:?}", s.points);
        }
    }
}
