mod common;

use blaschke::blaschke::{monomial_map, NumericMap};
use blaschke::dynamics::c_plus;
use blaschke::families::{equal_degree_default, random_generic_map, RandomZeros};
use blaschke::torus::{
    attracting_pair, backward_measure_sample, curve_growth_entropy, homology_action, orbit_drift, BackwardSampling,
    TorusMap, TorusPoint,
};
use common::nm;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn winding_equals_matrix_power(seed in any::<u64>(), which in 0usize..3) {
        let n = [nm(1, 1, 1, 2), nm(2, 1, 1, 1), nm(2, 1, 1, 2)][which];
        let f = random_generic_map(n, seed, RandomZeros { max_den: 8, max_modulus: 0.8 }).unwrap();
        for k in 1..=3 {
            let want = n.pow(k).map(|r| r.map(|x| x as i64));
            prop_assert_eq!(homology_action(&f, k).unwrap(), want);
        }
    }

    #[test]
    fn drift_per_step_is_tiny(seed in any::<u64>(), x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let f = random_generic_map(nm(1, 1, 1, 2), seed, RandomZeros::default()).unwrap();
        let tm = TorusMap::new(&f);
        let mut p = TorusPoint::new(x, y);
        for _ in 0..200 {
            let (q, d) = tm.step_with_drift(p);
            prop_assert!(d < 1e-9);
            p = q;
        }
    }

    #[test]
    fn attracting_point_is_fixed(seed in any::<u64>()) {
        let small = RandomZeros { max_den: 64, max_modulus: 0.05 };
        let f = random_generic_map(nm(2, 1, 1, 1), seed, small).unwrap();
        let tol = 1e-12;
        let pair = attracting_pair(&f, tol).require_converged().unwrap();
        let e = pair.interior.point;
        prop_assert!(e.0.norm() <= 1.0 && e.1.norm() <= 1.0);
        let fe = NumericMap::new(&f).eval(e.0, e.1);
        prop_assert!((fe.0 - e.0).norm().max((fe.1 - e.1).norm()) < tol);
    }
}

#[test]
fn long_orbit_drift() {
    let f = random_generic_map(nm(2, 1, 1, 1), 17, RandomZeros::default()).unwrap();
    assert!(orbit_drift(&f, TorusPoint::new(0.3, 0.8), 10_000) < 1e-12);
}

#[test]
fn entropy_estimate_improves_with_n() {
    let n = nm(1, 1, 1, 2);
    let target = c_plus(n).value().ln();
    let f = monomial_map(n);
    let errs: Vec<f64> = [4, 6, 9]
        .iter()
        .map(|&k| (curve_growth_entropy(&f, k, 128).unwrap().entropy - target).abs())
        .collect();
    assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{errs:?}");
    assert!(errs[2] < 0.1 * target);
}

#[test]
fn backward_samples_on_torus() {
    let p = BackwardSampling {
        depth: 4,
        samples: 12,
        seed: 2,
        d_top: 1,
    };
    let mono = backward_measure_sample(&monomial_map(nm(2, 1, 1, 1)), TorusPoint::new(0.6, 0.05), &p).unwrap();
    assert!(mono.dist.iter().all(|&d| d < 1e-13));
    for depth in 1..=3 {
        let p = BackwardSampling {
            depth,
            samples: 6,
            seed: 4,
            d_top: 5,
        };
        let c = backward_measure_sample(&equal_degree_default(), TorusPoint::new(0.25, 0.5), &p).unwrap();
        assert!(c.max_node_dist < 1e-8);
        assert_eq!(c.deficiencies, 0);
    }
}
