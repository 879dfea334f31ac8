//! All affine preimages of a target point.

use num_complex::Complex64;
use serde::Serialize;

use super::poly::{univariate_roots, ComplexPoly};
use super::resultant::{resultant_eliminate, BiComplexPoly, Var};
use crate::blaschke::{Blaschke2D, Factor, NumericMap};
use crate::error::{Error, Result};

/// Every tolerance used by the solver.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Largest accepted relative residual of the cleared equations, and of `f - target`.
    pub residual_tol: f64,
    /// Solutions closer than this (relative to `max(1, |x|)`) are merged.
    pub dedup_radius: f64,
    /// Joint residual for a back-substituted root to be kept before polishing.
    pub backsub_tol: f64,
    /// A denominator this small (relative) marks a spurious solution.
    pub denominator_tol: f64,
    pub newton_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            residual_tol: 1e-8,
            dedup_radius: 1e-8,
            backsub_tol: 1e-5,
            denominator_tol: 1e-8,
            newton_iters: 60,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionSet {
    /// Sorted lexicographically by real and imaginary parts, rounded to the
    /// dedup radius.
    pub points: Vec<(Complex64, Complex64)>,
    /// Max of the relative residuals of the two cleared equations.
    pub residuals: Vec<f64>,
    /// Near-singular Jacobian at the solution.
    pub multiplicity_flags: Vec<bool>,
    pub eliminated: Var,
    pub resultant_degree: usize,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `theta * numerator(x) * numerator(y) - t * denominator(x) * denominator(y)`.
fn cleared_equation(f: &Blaschke2D, coord: usize, t: Complex64) -> BiComplexPoly {
    let (fz, fw) = if coord == 0 { (Factor::A, Factor::B) } else { (Factor::C, Factor::D) };
    let (bz, bw) = (f.factor(fz), f.factor(fw));
    let num = BiComplexPoly::outer(&bz.numerator().to_c64(), &bw.numerator().to_c64());
    let den = BiComplexPoly::outer(&bz.denominator().to_c64(), &bw.denominator().to_c64());
    num.sub(&den.scale(t))
}

struct System {
    nm: NumericMap,
    eqs: [BiComplexPoly; 2],
    dens: [ComplexPoly; 4],
    target: (Complex64, Complex64),
    cfg: SolverConfig,
}

impl System {
    fn new(f: &Blaschke2D, target: (Complex64, Complex64), cfg: SolverConfig) -> Self {
        let den = |k: Factor| ComplexPoly::new(f.factor(k).denominator().to_c64());
        System {
            nm: NumericMap::new(f),
            eqs: [cleared_equation(f, 0, target.0), cleared_equation(f, 1, target.1)],
            dens: [den(Factor::A), den(Factor::B), den(Factor::C), den(Factor::D)],
            target,
            cfg,
        }
    }

    fn residual(&self, z: Complex64, w: Complex64) -> f64 {
        self.eqs[0].relative_residual(z, w).max(self.eqs[1].relative_residual(z, w))
    }

    fn near_pole(&self, z: Complex64, w: Complex64) -> bool {
        self.dens.iter().enumerate().any(|(k, d)| {
            let x = if k % 2 == 0 { z } else { w };
            d.relative_residual(x) < self.cfg.denominator_tol
        })
    }

    /// Newton's method on `f(z, w) = target`; keeps the best iterate.
    fn polish(&self, mut z: Complex64, mut w: Complex64) -> (Complex64, Complex64) {
        let err = |z, w| {
            let (x, y) = self.nm.eval(z, w);
            ((x - self.target.0).norm()).max((y - self.target.1).norm())
        };
        let mut best = err(z, w);
        for _ in 0..self.cfg.newton_iters {
            let (x, y) = self.nm.eval(z, w);
            let (fx, fy) = (x - self.target.0, y - self.target.1);
            let j = self.nm.jacobian(z, w);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det.norm() == 0.0 || !det.is_finite() {
                break;
            }
            let dz = (j[1][1] * fx - j[0][1] * fy) / det;
            let dw = (j[0][0] * fy - j[1][0] * fx) / det;
            let (nz, nw) = (z - dz, w - dw);
            let e = err(nz, nw);
            if !e.is_finite() || e >= best {
                break;
            }
            z = nz;
            w = nw;
            best = e;
            if best <= 1e-15 * (1.0 + self.target.0.norm().max(self.target.1.norm())) {
                break;
            }
        }
        (z, w)
    }

    fn singular(&self, z: Complex64, w: Complex64) -> bool {
        let j = self.nm.jacobian(z, w);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let scale = j.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
        det.norm() <= 1e-6 * scale * scale
    }

    fn solve(&self, eliminate: Var) -> Result<SolutionSet> {
        let keep = eliminate.other();
        let r = resultant_eliminate(&self.eqs[0], &self.eqs[1], eliminate)?;
        let degree = r.degree().unwrap_or(0);
        let roots = if degree == 0 { Vec::new() } else { univariate_roots(&r)? };
        let pair = |x: Complex64, y: Complex64| if keep == Var::Z { (x, y) } else { (y, x) };

        let mut found: Vec<(Complex64, Complex64)> = Vec::new();
        for x in roots {
            let p1 = ComplexPoly::new(self.eqs[0].specialize(eliminate, x));
            let p2 = ComplexPoly::new(self.eqs[1].specialize(eliminate, x));
            // either specialization may vanish numerically near a multiple root,
            // so candidates from both are screened against the bivariate equations
            for p in [p1, p2] {
                if !matches!(p.degree(), Some(d) if d >= 1) {
                    continue;
                }
                for y in univariate_roots(&p)? {
                    let (z, w) = pair(x, y);
                    if self.residual(z, w) <= self.cfg.backsub_tol {
                        found.push(self.polish(z, w));
                    }
                }
            }
        }

        let mut points: Vec<(Complex64, Complex64)> = Vec::new();
        for (z, w) in found {
            if !(z.is_finite() && w.is_finite()) || self.near_pole(z, w) {
                continue;
            }
            let (x, y) = self.nm.eval(z, w);
            let miss = (x - self.target.0).norm().max((y - self.target.1).norm());
            if self.residual(z, w) > self.cfg.residual_tol || miss > self.cfg.residual_tol {
                continue;
            }
            let rad = self.cfg.dedup_radius;
            let close = |a: Complex64, b: Complex64| (a - b).norm() <= rad * a.norm().max(1.0);
            if points.iter().any(|&(pz, pw)| close(pz, z) && close(pw, w)) {
                continue;
            }
            points.push((z, w));
        }
        // quantized keys: noise below the dedup scale cannot reorder points
        let key = |p: &(Complex64, Complex64)| {
            let q = |v: f64| (v / self.cfg.dedup_radius).round() as i64;
            (q(p.0.re), q(p.0.im), q(p.1.re), q(p.1.im))
        };
        points.sort_by_key(key);
        Ok(SolutionSet {
            residuals: points.iter().map(|&(z, w)| self.residual(z, w)).collect(),
            multiplicity_flags: points.iter().map(|&(z, w)| self.singular(z, w)).collect(),
            points,
            eliminated: eliminate,
            resultant_degree: degree,
        })
    }
}

/// Solutions found by eliminating one variable.
pub fn solve_system_order(
    f: &Blaschke2D,
    target: (Complex64, Complex64),
    eliminate: Var,
    cfg: &SolverConfig,
) -> Result<SolutionSet> {
    System::new(f, target, *cfg).solve(eliminate)
}

/// All affine solutions of `f(z, w) = target`. Both elimination orders are
/// run; their counts must agree.
pub fn solve_system(f: &Blaschke2D, target: (Complex64, Complex64), cfg: &SolverConfig) -> Result<SolutionSet> {
    let sys = System::new(f, target, *cfg);
    let a = sys.solve(Var::W)?;
    let b = sys.solve(Var::Z)?;
    if a.len() != b.len() {
        return Err(Error::SolverDeficiency(format!(
            "{} solutions eliminating w, {} eliminating z",
            a.len(),
            b.len()
        )));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, GR};
    use crate::blaschke::{build_map, monomial_map, DegreeMatrix};
    use num_traits::One;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(n: i64, d: i64) -> GR {
        GR::real(rat(n, d))
    }

    #[test]
    fn monomial_inverse() {
        let f = monomial_map(DegreeMatrix::new(1, 1, 1, 2).unwrap());
        let s = solve_system(&f, (c(6.0, 0.0), c(18.0, 0.0)), &SolverConfig::default()).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.points[0].0 - c(2.0, 0.0)).norm() < 1e-10);
        assert!((s.points[0].1 - c(3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn generic_count_and_origin() {
        let f = build_map(
            vec![r(1, 2)],
            vec![r(1, 3)],
            vec![r(1, 5)],
            vec![GR::from_parts(0, 1, 1, 4), r(1, 7)],
            GR::from_parts(2, 1, 1, 1),
            GR::one(),
        )
        .unwrap();
        let s = solve_system(&f, (c(0.3, -0.2), c(-0.1, 0.45)), &SolverConfig::default()).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.residuals.iter().all(|&x| x < 1e-10));
        let o = solve_system(&f, (c(0.0, 0.0), c(0.0, 0.0)), &SolverConfig::default()).unwrap();
        let expect = [(c(0.2, 0.0), c(1.0 / 3.0, 0.0)), (c(0.5, 0.0), c(0.0, 0.25)), (c(0.5, 0.0), c(1.0 / 7.0, 0.0))];
        assert_eq!(o.len(), 3);
        for (p, e) in o.points.iter().zip(expect) {
            assert!((p.0 - e.0).norm() < 1e-12 && (p.1 - e.1).norm() < 1e-12, "{p:?} vs {e:?}");
        }
    }

    #[test]
    fn named_family_counts() {
        use crate::families::{equal_degree_default, low_top_degree_default};
        let cfg = SolverConfig::default();
        for (f, d) in [(low_top_degree_default(), 5), (equal_degree_default(), 5)] {
            for t in [(c(0.31, 0.12), c(-0.2, 0.4)), (c(-0.5, -0.1), c(0.05, -0.6))] {
                let s = solve_system(&f, t, &cfg).unwrap();
                assert_eq!(s.len(), d);
            }
        }
    }
}
