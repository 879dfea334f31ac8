//! Topological degree, genericity, and the exact case classification.

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::GR;
use crate::blaschke::{Blaschke2D, DegreeMatrix, Factor, NumericMap};
use crate::dynamics::{c_plus, QuadraticSurd};
use crate::error::{Error, Result};
use crate::geometry::critical_jacobian;
use crate::solver::{solve_system, univariate_roots, ComplexPoly, SolutionSet, SolverConfig};

/// `Z(A) x Z(D)` followed by `Z(C) x Z(B)`, with repetitions.
pub fn preimages_of_origin(f: &Blaschke2D) -> Vec<(GR, GR)> {
    let mut out = Vec::new();
    for (zs, ws) in [(Factor::A, Factor::D), (Factor::C, Factor::B)] {
        for z in f.zeros(zs) {
            for w in f.zeros(ws) {
                out.push((z.clone(), w.clone()));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Genericity {
    pub generic: bool,
    /// Empty iff `generic`.
    pub reasons: Vec<String>,
}

/// Zeros pairwise distinct, nonzero, and not critical for their own factor.
pub fn is_generic(f: &Blaschke2D) -> Genericity {
    let mut reasons = Vec::new();
    let all: Vec<(Factor, &GR)> = Factor::ALL
        .iter()
        .flat_map(|&k| f.zeros(k).iter().map(move |z| (k, z)))
        .collect();
    for (i, (k, z)) in all.iter().enumerate() {
        if z.is_zero() {
            reasons.push(format!("zero of {} at the origin", k.label()));
        }
        if let Some((k2, _)) = all[i + 1..].iter().find(|(_, y)| y == z) {
            reasons.push(format!("{z} is a zero of both {} and {}", k.label(), k2.label()));
        }
    }
    for k in Factor::ALL {
        let b = f.factor(k);
        for z in f.zeros(k) {
            if b.derivative_at(z).is_some_and(|d| d.is_zero()) {
                reasons.push(format!("{z} is critical for {}", k.label()));
            }
        }
    }
    reasons.dedup();
    Genericity {
        generic: reasons.is_empty(),
        reasons,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DegreeStrategy {
    /// `mq + np`; requires a generic map.
    ExactGeneric,
    /// `det N`; requires all zeros at the origin.
    Monomial,
    /// Preimage count at two seeded random targets.
    Numeric { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TopologicalDegree {
    pub value: u64,
    pub strategy: DegreeStrategy,
    /// Targets used by the numeric strategy, with their solution sets.
    pub targets: Vec<(Complex64, Complex64)>,
    pub solutions: Vec<SolutionSet>,
}

pub fn topological_degree(f: &Blaschke2D, strategy: DegreeStrategy) -> Result<TopologicalDegree> {
    topological_degree_with(f, strategy, &SolverConfig::default())
}

pub fn topological_degree_with(
    f: &Blaschke2D,
    strategy: DegreeStrategy,
    cfg: &SolverConfig,
) -> Result<TopologicalDegree> {
    let exact = |value: i64| TopologicalDegree {
        value: value as u64,
        strategy,
        targets: Vec::new(),
        solutions: Vec::new(),
    };
    match strategy {
        DegreeStrategy::ExactGeneric => {
            let g = is_generic(f);
            if !g.generic {
                return Err(Error::NotGeneric(g.reasons.join("; ")));
            }
            Ok(exact(f.degree_matrix().generic_top_degree()))
        }
        DegreeStrategy::Monomial => {
            if !f.is_monomial() {
                return Err(Error::NotMonomial);
            }
            Ok(exact(f.degree_matrix().det()))
        }
        DegreeStrategy::Numeric { seed } => {
            let targets = numeric_targets(f, seed, 2);
            let solutions = targets
                .iter()
                .map(|&t| solve_system(f, t, cfg))
                .collect::<Result<Vec<_>>>()?;
            let (a, b) = (solutions[0].len(), solutions[1].len());
            if a != b {
                return Err(Error::SolverDeficiency(format!(
                    "{a} preimages at the first target, {b} at the second"
                )));
            }
            Ok(TopologicalDegree {
                value: a as u64,
                strategy,
                targets,
                solutions,
            })
        }
    }
}

/// Closer than this to a sampled critical value forces a redraw.
const CRITICAL_CLEARANCE: f64 = 1e-4;

/// Critical values over a polar grid of `z`.
pub fn sampled_critical_values(f: &Blaschke2D) -> Vec<(Complex64, Complex64)> {
    let jac = critical_jacobian(f);
    let nm = NumericMap::new(f);
    let deg_w = jac.numerator.terms().keys().map(|e| e[1]).max().unwrap_or(0) as usize;
    let mut out = Vec::new();
    for ri in 1..=12 {
        let r = 0.125 * ri as f64;
        for ai in 0..24 {
            let z = Complex64::from_polar(r, std::f64::consts::TAU * (ai as f64 + 0.5) / 24.0);
            let mut coeffs = vec![Complex64::zero(); deg_w + 1];
            for (e, c) in jac.numerator.terms() {
                coeffs[e[1] as usize] += c.to_c64() * z.powu(e[0]);
            }
            let p = ComplexPoly::new(coeffs);
            if !matches!(p.degree(), Some(d) if d >= 1) {
                continue;
            }
            let Ok(ws) = univariate_roots(&p) else { continue };
            for w in ws {
                let v = nm.eval(z, w);
                if v.0.is_finite() && v.1.is_finite() {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// `count` targets of modulus near 1/2 in each coordinate, away from the
/// sampled critical values. Deterministic in `seed`.
pub fn numeric_targets(f: &Blaschke2D, seed: u64, count: usize) -> Vec<(Complex64, Complex64)> {
    let crit = sampled_critical_values(f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let r = rng.random_range(0.45..0.55);
        Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let t = (draw(&mut rng), draw(&mut rng));
        let near = crit
            .iter()
            .any(|c| (c.0 - t.0).norm().max((c.1 - t.1).norm()) < CRITICAL_CLEARANCE);
        if !near {
            out.push(t);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    /// `d_top > c+`.
    I,
    /// `d_top < c+`.
    II,
    /// `d_top = c+`.
    III,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "I",
            Case::II => "II",
            Case::III => "III",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CaseLabel {
    pub case: Case,
    pub d_top: i64,
    /// `m + q`.
    pub trace: i64,
    pub det: i64,
    /// `d_top^2 - (m+q) d_top + det N`.
    pub p_value: i64,
    pub c_plus: QuadraticSurd,
}

/// Compares `d_top` with `c+(N)` through the sign of its characteristic
/// polynomial and the side of the vertex `(m+q)/2`.
pub fn classify_case(n: DegreeMatrix, d_top: i64) -> Result<CaseLabel> {
    let det = n.det();
    if d_top < det {
        return Err(Error::InvariantViolation(format!("d_top = {d_top} < det N = {det}")));
    }
    let c = c_plus(n);
    let p = c.char_poly_at(d_top);
    let twice = 2 * d_top;
    let case = match p.signum() {
        -1 => Case::II,
        0 if twice >= c.trace => Case::III,
        // the smaller root: below c+
        0 => Case::II,
        _ if twice > c.trace => Case::I,
        _ => Case::II,
    };
    Ok(CaseLabel {
        case,
        d_top,
        trace: c.trace,
        det,
        p_value: p,
        c_plus: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::blaschke::{build_map, eval_affine, monomial_map, AffineValue, DEFAULT_INDET_TOL};
    use crate::families::{equal_degree_default, low_top_degree_default};
    use num_traits::One;
    use std::cmp::Ordering;

    fn r(n: i64, d: i64) -> GR {
        GR::real(rat(n, d))
    }

    fn small() -> Blaschke2D {
        build_map(
            vec![r(1, 2)],
            vec![r(1, 3)],
            vec![r(1, 5)],
            vec![GR::from_parts(0, 1, 1, 4), r(1, 7)],
            GR::one(),
            GR::one(),
        )
        .unwrap()
    }

    #[test]
    fn origin_preimages() {
        let f = small();
        let pts = preimages_of_origin(&f);
        let q = GR::from_parts(0, 1, 1, 4);
        assert_eq!(pts, vec![(r(1, 2), q), (r(1, 2), r(1, 7)), (r(1, 5), r(1, 3))]);
        for (z, w) in &pts {
            let v = eval_affine(&f, z.to_c64(), w.to_c64(), DEFAULT_INDET_TOL);
            assert_eq!(v, AffineValue::Finite(Complex64::zero(), Complex64::zero()));
            let exact = f.eval_exact(z, w).unwrap();
            assert!(exact.0.is_zero() && exact.1.is_zero());
        }
    }

    #[test]
    fn repeated_zeros_repeat() {
        let pts = preimages_of_origin(&equal_degree_default());
        assert_eq!(pts.len(), 13);
        let mut distinct = pts.clone();
        distinct.sort_by_key(|p| format!("{p:?}"));
        distinct.dedup();
        // every (c, b) pair already occurs as an (a, d) pair
        assert_eq!(distinct.len(), 3);
    }

    #[test]
    fn genericity() {
        assert!(is_generic(&small()).generic);
        let g = is_generic(&low_top_degree_default());
        assert!(!g.generic && g.reasons.iter().any(|s| s.contains("both A and C")));
        let m = is_generic(&monomial_map(DegreeMatrix::new(1, 1, 1, 2).unwrap()));
        assert!(!m.generic && m.reasons[0].contains("origin"));
    }

    #[test]
    fn degree_strategies() {
        let f = small();
        assert_eq!(topological_degree(&f, DegreeStrategy::ExactGeneric).unwrap().value, 3);
        assert_eq!(topological_degree(&f, DegreeStrategy::Numeric { seed: 1 }).unwrap().value, 3);
        assert!(matches!(topological_degree(&f, DegreeStrategy::Monomial), Err(Error::NotMonomial)));
        let m = monomial_map(DegreeMatrix::new(2, 1, 1, 1).unwrap());
        assert_eq!(topological_degree(&m, DegreeStrategy::Monomial).unwrap().value, 1);
        assert!(matches!(
            topological_degree(&low_top_degree_default(), DegreeStrategy::ExactGeneric),
            Err(Error::NotGeneric(_))
        ));
    }

    #[test]
    fn named_family_degrees() {
        for f in [low_top_degree_default(), equal_degree_default()] {
            let d = topological_degree(&f, DegreeStrategy::Numeric { seed: 11 }).unwrap();
            assert_eq!(d.value, 5);
            assert_eq!(d.targets.len(), 2);
        }
    }

    #[test]
    fn targets_are_reproducible() {
        let f = small();
        assert_eq!(numeric_targets(&f, 5, 3), numeric_targets(&f, 5, 3));
        assert_ne!(numeric_targets(&f, 5, 1), numeric_targets(&f, 6, 1));
    }

    #[test]
    fn worked_classifications() {
        let l = classify_case(DegreeMatrix::new(5, 2, 2, 1).unwrap(), 5).unwrap();
        assert_eq!((l.case, l.p_value), (Case::II, -4));
        assert_eq!(l.c_plus.to_string(), "(6+sqrt(32))/2");
        let l = classify_case(DegreeMatrix::new(3, 2, 2, 3).unwrap(), 5).unwrap();
        assert_eq!((l.case, l.p_value), (Case::III, 0));
        let l = classify_case(DegreeMatrix::new(1, 1, 1, 2).unwrap(), 3).unwrap();
        assert_eq!((l.case, l.p_value), (Case::I, 1));
        assert!(matches!(
            classify_case(DegreeMatrix::new(3, 2, 2, 3).unwrap(), 4),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn classification_matches_surd_comparison() {
        for m in 1..=6u32 {
            for n in 1..=6u32 {
                for p in 1..=6u32 {
                    for q in 1..=6u32 {
                        let Ok(nm) = DegreeMatrix::new(m, n, p, q) else { continue };
                        let c = c_plus(nm);
                        for d in nm.det()..=((m + n) * (p + q)) as i64 {
                            let want = match c.cmp_int(d) {
                                Ordering::Less => Case::I,
                                Ordering::Greater => Case::II,
                                Ordering::Equal => Case::III,
                            };
                            assert_eq!(classify_case(nm, d).unwrap().case, want, "{nm:?} {d}");
                        }
                    }
                }
            }
        }
    }
}
