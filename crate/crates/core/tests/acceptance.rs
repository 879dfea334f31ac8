//! Acceptance checks. Runs as a plain binary so that every criterion prints
//! one PASS/FAIL line, even when all of them succeed.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use blaschke::arith::{gcd_cofactors, poly_gcd, rat, TermBudget, TriPoly, GR};
use blaschke::blaschke::{monomial_map, Blaschke2D, DegreeMatrix, Factor, UnimodularRotation};
use blaschke::dynamics::{c_plus, degree_sequence, estimate_lambda1, pullback_matrix, predicted_degrees};
use blaschke::families::{equal_degree_default, low_top_degree_default, random_generic_map, RandomZeros};
use blaschke::geometry::{critical_jacobian, expected_indeterminacy_count, indeterminacy_points, line_arrangement};
use blaschke::solver::{solve_system, solve_system_order, SolverConfig, Var};
use blaschke::topology::{classify_case, numeric_targets, topological_degree, Case, DegreeStrategy};
use blaschke::torus::{
    backward_measure_sample, curve_growth_entropy, homology_action, BackwardSampling, TorusPoint,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn nm(m: u32, n: u32, p: u32, q: u32) -> DegreeMatrix {
    DegreeMatrix::new(m, n, p, q).unwrap()
}

fn err(e: blaschke::Error) -> String {
    format!("{} ({})", e, e.code())
}

fn c1_dynamical_degree() -> Outcome {
    let n = nm(1, 1, 1, 2);
    let f = random_generic_map(n, 2024, RandomZeros::default()).map_err(err)?;
    let s = degree_sequence(&f, 3, &TermBudget::UNLIMITED).map_err(err)?;
    let p = predicted_degrees(n, 3);
    check(s.degrees == vec![5, 13, 34], || format!("measured {:?}", s.degrees))?;
    check(s == p, || format!("predicted {:?}", p.degrees))?;
    let est = estimate_lambda1(&s).map_err(err)?;
    let c = c_plus(n).value();
    let rel = (est.ratio - c).abs() / c;
    check(rel < 0.005, || format!("ratio {} vs {c}", est.ratio))?;
    Ok(format!("degrees {:?}, ratio 34/13 off c+ by {:.3}%", s.degrees, 100.0 * rel))
}

fn c2_pullback_matrix() -> Outcome {
    let mut count = 0;
    for m in 1..=5 {
        for n in 1..=5 {
            for p in 1..=5 {
                for q in 1..=5 {
                    let Ok(d) = DegreeMatrix::new(m, n, p, q) else { continue };
                    let cp = pullback_matrix(d).char_poly();
                    // x (x^2 - (m+q) x + det N)
                    let want = [0, d.det(), -(d.trace()), 1];
                    check(cp == want, || format!("{:?}: {cp:?}", d.rows()))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} matrices"))
}

fn c3_topological_degree() -> Outcome {
    let cfg = SolverConfig::default();
    let mut report = Vec::new();
    for (k, n) in [nm(1, 1, 1, 2), nm(2, 1, 1, 1), nm(1, 2, 1, 3)].into_iter().enumerate() {
        let f = random_generic_map(n, 100 + k as u64, RandomZeros::default()).map_err(err)?;
        let want = n.generic_top_degree() as usize;
        for t in numeric_targets(&f, 7 + k as u64, 2) {
            let a = solve_system_order(&f, t, Var::W, &cfg).map_err(err)?;
            let b = solve_system_order(&f, t, Var::Z, &cfg).map_err(err)?;
            check(a.len() == want && b.len() == want, || {
                format!("{:?}: {} and {} solutions, expected {want}", n.rows(), a.len(), b.len())
            })?;
            let worst = a.residuals.iter().chain(&b.residuals).fold(0.0f64, |x, &y| x.max(y));
            check(worst < 1e-8, || format!("{:?}: residual {worst:e}", n.rows()))?;
        }
        report.push(format!("{:?}->{want}", n.rows()));
    }
    Ok(report.join(", "))
}

fn c4_low_top_degree() -> Outcome {
    let f = low_top_degree_default();
    let d = topological_degree(&f, DegreeStrategy::Numeric { seed: 1 }).map_err(err)?;
    check(d.value == 5, || format!("d_top = {}", d.value))?;
    let l = classify_case(f.degree_matrix(), d.value as i64).map_err(err)?;
    check(l.case == Case::II && l.p_value == -4, || format!("{l:?}"))?;
    let c = l.c_plus.to_string();
    check(c == "(6+sqrt(32))/2", || c.clone())?;
    Ok(format!("d_top 5, case {}, p(5) = {}, c+ = {c}", l.case, l.p_value))
}

fn c5_equal_degree() -> Outcome {
    let f = equal_degree_default();
    let d = topological_degree(&f, DegreeStrategy::Numeric { seed: 1 }).map_err(err)?;
    let det = f.degree_matrix().det();
    check(d.value as i64 == 5 && det == 5, || format!("d_top = {}, det = {det}", d.value))?;
    let l = classify_case(f.degree_matrix(), 5).map_err(err)?;
    check(l.case == Case::III && l.p_value == 0, || format!("{l:?}"))?;
    let p = BackwardSampling {
        depth: 3,
        samples: 24,
        seed: 5,
        d_top: 5,
    };
    let cloud = backward_measure_sample(&f, TorusPoint::new(0.31, 0.77), &p).map_err(err)?;
    check(cloud.deficiencies == 0 && cloud.dropped == 0, || {
        format!("{} deficient nodes, {} dropped", cloud.deficiencies, cloud.dropped)
    })?;
    check(cloud.max_node_dist < 1e-8, || format!("preimage {:e} off the torus", cloud.max_node_dist))?;
    Ok(format!(
        "d_top 5 = det N, case III, p(5) = 0, max torus distance {:.1e} over {} orbits",
        cloud.max_node_dist, p.samples
    ))
}

fn c6_indeterminacy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut done = 0;
    let mut seed = 0u64;
    while done < 10 {
        seed += 1;
        let n = DegreeMatrix::new(
            rng.random_range(1..=3),
            rng.random_range(1..=3),
            rng.random_range(1..=3),
            rng.random_range(1..=3),
        );
        let Ok(n) = n else { continue };
        let f = random_generic_map(n, seed, RandomZeros::default()).map_err(err)?;
        let set = indeterminacy_points(&f).strict().map_err(err)?;
        let want = expected_indeterminacy_count(&f);
        check(set.finite.len() as i64 == want, || {
            format!("{:?}: {} points, expected {want}", n.rows(), set.finite.len())
        })?;
        // independent exact check on the unreduced lift
        let raw = blaschke::blaschke::raw_lift(&f);
        for (z, w) in &set.finite {
            let v = raw.eval(&[z.clone(), w.clone(), GR::one()]);
            check(v.iter().all(|x| x.is_zero()), || format!("({z}, {w}) is not a common zero"))?;
        }
        done += 1;
    }
    Ok("10 maps, counts 2(mn+pq)+(mq+np)".into())
}

fn c7_homology() -> Outcome {
    let mut maps: Vec<Blaschke2D> = Vec::new();
    for (k, n) in [nm(1, 1, 1, 2), nm(2, 1, 1, 1), nm(3, 2, 2, 3)].into_iter().enumerate() {
        maps.push(random_generic_map(n, 70 + k as u64, RandomZeros::default()).map_err(err)?);
        maps.push(monomial_map(n));
    }
    for f in &maps {
        let n = f.degree_matrix();
        for k in 1..=3 {
            let h = homology_action(f, k).map_err(err)?;
            let want = n.pow(k).map(|r| r.map(|x| x as i64));
            check(h == want, || format!("{:?}^{k}: got {h:?}", n.rows()))?;
        }
    }
    Ok(format!("{} maps, n = 1..3", maps.len()))
}

fn c8_entropy() -> Outcome {
    let n = nm(2, 1, 1, 1);
    let target = c_plus(n).value().ln();
    let lin = curve_growth_entropy(&monomial_map(n), 12, 128).map_err(err)?;
    let e1 = (lin.entropy - target).abs() / target;
    check(e1 < 0.10, || format!("linear map: {} vs {target}", lin.entropy))?;
    let small = RandomZeros {
        max_den: 64,
        max_modulus: 0.05,
    };
    let f = random_generic_map(n, 8, small).map_err(err)?;
    let per = curve_growth_entropy(&f, 12, 128).map_err(err)?;
    let e2 = (per.entropy - target).abs() / target;
    check(e2 < 0.15, || format!("perturbed map: {} vs {target}", per.entropy))?;
    Ok(format!(
        "log c+ = {target:.6}; linear {:.6} ({:.3}%), perturbed {:.6} ({:.3}%)",
        lin.entropy,
        100.0 * e1,
        per.entropy,
        100.0 * e2
    ))
}

fn c9_rotation_invariance() -> Outcome {
    let seeds = [GR::one(), GR::from_ints(2, 1), GR::from_parts(-3, 1, 5, 7)];
    for (k, n) in [nm(1, 1, 1, 2), nm(2, 1, 2, 2)].into_iter().enumerate() {
        let base = random_generic_map(n, 90 + k as u64, RandomZeros::default()).map_err(err)?;
        let mut seen: Option<(BTreeSet<(GR, GR)>, Vec<_>, TriPoly)> = None;
        for (i, u) in seeds.iter().enumerate() {
            let f = base.with_rotations(u.clone(), seeds[(i + 1) % 3].clone()).map_err(err)?;
            let ind = indeterminacy_points(&f).finite_set();
            let lines: Vec<_> = line_arrangement(&f).iter().map(|l| (l.kind, l.normalized())).collect();
            let crit = critical_jacobian(&f).vanishing_locus();
            match &seen {
                None => seen = Some((ind, lines, crit)),
                Some((a, b, c)) => {
                    check(a == &ind, || format!("{:?}: indeterminacy differs", n.rows()))?;
                    check(b == &lines, || format!("{:?}: lines differ", n.rows()))?;
                    check(c == &crit, || format!("{:?}: critical locus differs", n.rows()))?;
                }
            }
        }
    }
    Ok("2 maps x 3 rotation seeds".into())
}

fn random_gr(rng: &mut ChaCha8Rng, den: i64) -> GR {
    loop {
        let z = GR::from_parts(rng.random_range(-den..=den), den, rng.random_range(-den..=den), den);
        if z.norm_sqr() < rat(1, 1) {
            return z;
        }
    }
}

fn c10_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    // gcd of products with a planted common factor
    for _ in 0..20 {
        let lin = |rng: &mut ChaCha8Rng| {
            TriPoly::linear(random_gr(rng, 5), random_gr(rng, 5), random_gr(rng, 5))
        };
        let g = lin(&mut rng).mul(&lin(&mut rng));
        let a = g.mul(&lin(&mut rng)).mul(&lin(&mut rng));
        let b = g.mul(&lin(&mut rng));
        let h = poly_gcd(&a, &b).map_err(err)?;
        check(a.div_exact(&h).is_some() && b.div_exact(&h).is_some(), || "gcd does not divide".into())?;
        check(h.degree() >= 2, || format!("gcd degree {}", h.degree()))?;
        let cf = gcd_cofactors(&[a.clone(), b.clone()]).map_err(err)?;
        let g2 = poly_gcd(&cf.cofactors[0], &cf.cofactors[1]).map_err(err)?;
        check(g2.degree() == 0, || "cofactors share a factor".into())?;
    }
    // rotations and circle values are unimodular in exact arithmetic
    for _ in 0..20 {
        let mut u = random_gr(&mut rng, 9);
        if u.is_zero() {
            u = GR::one();
        }
        let th = UnimodularRotation::new(u).map_err(err)?;
        check(th.value().norm_sqr() == rat(1, 1), || "rotation not unimodular".into())?;
        let f = random_generic_map(nm(2, 1, 1, 2), rng.random(), RandomZeros::default()).map_err(err)?;
        // rational point of the unit circle
        let t = rat(rng.random_range(-20..=20), rng.random_range(1..=20));
        let d = rat(1, 1) + &t * &t;
        let x = GR::new((rat(1, 1) - &t * &t) / &d, (rat(2, 1) * &t) / &d);
        for k in Factor::ALL {
            let v = f.factor(k).eval(&x).ok_or("pole on the circle")?;
            check(v.norm_sqr() == rat(1, 1), || format!("|{}({x})| != 1", k.label()))?;
        }
    }
    // planted preimages are recovered
    let cfg = SolverConfig::default();
    for k in 0..10 {
        let n = [nm(1, 1, 1, 2), nm(2, 1, 1, 1)][k % 2];
        let f = random_generic_map(n, 300 + k as u64, RandomZeros::default()).map_err(err)?;
        let (z, w) = (random_gr(&mut rng, 7), random_gr(&mut rng, 7));
        let Some((x, y)) = f.eval_exact(&z, &w) else { continue };
        let s = solve_system(&f, (x.to_c64(), y.to_c64()), &cfg).map_err(err)?;
        let hit = s
            .points
            .iter()
            .any(|p| (p.0 - z.to_c64()).norm() < 1e-8 && (p.1 - w.to_c64()).norm() < 1e-8);
        check(hit, || format!("planted ({z}, {w}) not found among {:?}", s.points))?;
    }
    // backward sampling: exact on monomial maps, reported for a generic one
    let p = BackwardSampling {
        depth: 4,
        samples: 16,
        seed: 3,
        d_top: 1,
    };
    let mono = backward_measure_sample(&monomial_map(nm(1, 1, 1, 2)), TorusPoint::new(0.4, 0.15), &p).map_err(err)?;
    let worst = mono.dist.iter().fold(0.0f64, |a, &b| a.max(b));
    check(worst < 1e-12, || format!("monomial endpoint {worst:e} off the torus"))?;
    let small = RandomZeros {
        max_den: 64,
        max_modulus: 0.05,
    };
    let g = random_generic_map(nm(1, 1, 1, 2), 12, small).map_err(err)?;
    let gp = BackwardSampling { d_top: 3, ..p };
    let cloud = backward_measure_sample(&g, TorusPoint::new(0.4, 0.15), &gp).map_err(err)?;
    Ok(format!(
        "gcd, unimodularity, planted preimages, monomial dist {worst:.1e}; generic far fraction {:.2} (histogram {:?})",
        cloud.far_fraction, cloud.histogram.counts
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("dynamical degree formula", 60, c1_dynamical_degree),
        ("pullback characteristic polynomial", 1, c2_pullback_matrix),
        ("topological degree of generic maps", 30, c3_topological_degree),
        ("low topological degree family", 30, c4_low_top_degree),
        ("equal degree family", 60, c5_equal_degree),
        ("indeterminacy census", 10, c6_indeterminacy),
        ("homology action", 30, c7_homology),
        ("torus entropy", 120, c8_entropy),
        ("rotation invariance", 10, c9_rotation_invariance),
        ("property suite", 120, c10_properties),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let late = took > Duration::from_secs(limit);
        let (tag, detail) = match (&out, late) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over the {limit} s limit; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {tag} [{:7.2} s] {name}: {detail}", i + 1, took.as_secs_f64());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
