use num_complex::Complex64;
use serde::Serialize;

use super::lift::factored_lift;
use super::map::{Blaschke2D, Factor};

/// Default relative threshold below which a lifted coordinate counts as zero.
pub const DEFAULT_INDET_TOL: f64 = 1e-9;

/// Value of the map at an affine point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum AffineValue {
    Finite(Complex64, Complex64),
    /// Image on the line at infinity; projective coordinates scaled to max-norm 1.
    AtInfinity([Complex64; 3]),
    /// All three lifted coordinates vanish.
    Indeterminate,
}

impl AffineValue {
    pub fn finite(&self) -> Option<(Complex64, Complex64)> {
        match *self {
            AffineValue::Finite(x, y) => Some((x, y)),
            _ => None,
        }
    }
}

/// Double-precision copy of a map, cheap to evaluate repeatedly.
#[derive(Clone, Debug)]
pub struct NumericMap {
    zeros: [Vec<Complex64>; 4],
    theta: [Complex64; 2],
    /// reduced lift: scalar and linear forms per component
    scalars: [Complex64; 3],
    forms: [Vec<[Complex64; 3]>; 3],
}

impl NumericMap {
    pub fn new(f: &Blaschke2D) -> Self {
        let conv = |k: Factor| f.zeros(k).iter().map(|z| z.to_c64()).collect::<Vec<_>>();
        let (fm, _) = factored_lift(f);
        NumericMap {
            zeros: [conv(Factor::A), conv(Factor::B), conv(Factor::C), conv(Factor::D)],
            theta: [f.theta(0).to_c64(), f.theta(1).to_c64()],
            scalars: [
                fm.scalars[0].to_c64(),
                fm.scalars[1].to_c64(),
                fm.scalars[2].to_c64(),
            ],
            forms: [
                fm.forms[0].iter().map(|l| l.to_c64()).collect(),
                fm.forms[1].iter().map(|l| l.to_c64()).collect(),
                fm.forms[2].iter().map(|l| l.to_c64()).collect(),
            ],
        }
    }

    pub fn zeros(&self, k: Factor) -> &[Complex64] {
        &self.zeros[k as usize]
    }

    pub fn theta(&self, coordinate: usize) -> Complex64 {
        self.theta[coordinate]
    }

    /// One-variable factor (with its rotation for `A` and `C`).
    pub fn factor_value(&self, k: Factor, x: Complex64) -> Complex64 {
        let mut acc = match k {
            Factor::A => self.theta[0],
            Factor::C => self.theta[1],
            _ => Complex64::new(1.0, 0.0),
        };
        for &a in &self.zeros[k as usize] {
            acc *= (x - a) / (1.0 - a.conj() * x);
        }
        acc
    }

    /// Direct product formula; no special-value handling.
    pub fn eval(&self, z: Complex64, w: Complex64) -> (Complex64, Complex64) {
        (
            self.factor_value(Factor::A, z) * self.factor_value(Factor::B, w),
            self.factor_value(Factor::C, z) * self.factor_value(Factor::D, w),
        )
    }

    /// Derivative of a factor by the product rule; finite at its zeros.
    pub fn factor_derivative(&self, k: Factor, x: Complex64) -> Complex64 {
        let zs = &self.zeros[k as usize];
        let mobius: Vec<Complex64> = zs.iter().map(|&a| (x - a) / (1.0 - a.conj() * x)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &a) in zs.iter().enumerate() {
            let den = 1.0 - a.conj() * x;
            let mut term = (1.0 - a.norm_sqr()) / (den * den);
            for (j, m) in mobius.iter().enumerate() {
                if j != i {
                    term *= m;
                }
            }
            acc += term;
        }
        let theta = match k {
            Factor::A => self.theta[0],
            Factor::C => self.theta[1],
            _ => Complex64::new(1.0, 0.0),
        };
        theta * acc
    }

    /// Jacobian matrix of the direct formula.
    pub fn jacobian(&self, z: Complex64, w: Complex64) -> [[Complex64; 2]; 2] {
        let v = |k| self.factor_value(k, if matches!(k, Factor::A | Factor::C) { z } else { w });
        let d = |k| self.factor_derivative(k, if matches!(k, Factor::A | Factor::C) { z } else { w });
        [
            [d(Factor::A) * v(Factor::B), v(Factor::A) * d(Factor::B)],
            [d(Factor::C) * v(Factor::D), v(Factor::C) * d(Factor::D)],
        ]
    }

    /// Reduced lift at `[z : w : 1]`, with each coordinate's size relative to
    /// the product of its linear-form norms.
    pub fn lift_values(&self, z: Complex64, w: Complex64) -> ([Complex64; 3], [f64; 3]) {
        let scale = 1.0f64.max(z.norm()).max(w.norm());
        let mut vals = [Complex64::new(0.0, 0.0); 3];
        let mut rel = [0.0f64; 3];
        for k in 0..3 {
            let mut acc = self.scalars[k];
            let mut r = 1.0;
            for l in &self.forms[k] {
                let v = l[0] * z + l[1] * w + l[2];
                let norm = (l[0].norm() + l[1].norm() + l[2].norm()) * scale;
                acc *= v;
                r *= v.norm() / norm;
            }
            vals[k] = acc;
            rel[k] = r;
        }
        (vals, rel)
    }

    pub fn eval_affine(&self, z: Complex64, w: Complex64, tol: f64) -> AffineValue {
        let (vals, rel) = self.lift_values(z, w);
        if rel.iter().all(|&r| r < tol) {
            return AffineValue::Indeterminate;
        }
        if rel[2] < tol {
            let big = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let mut out = vals.map(|v| v / big);
            out[2] = Complex64::new(0.0, 0.0);
            return AffineValue::AtInfinity(out);
        }
        AffineValue::Finite(vals[0] / vals[2], vals[1] / vals[2])
    }
}

/// Value of `f` at `(z, w)` through its reduced lift.
pub fn eval_affine(f: &Blaschke2D, z: Complex64, w: Complex64, tol: f64) -> AffineValue {
    NumericMap::new(f).eval_affine(z, w, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, GR};
    use num_traits::One;
    use crate::blaschke::map::{build_map, monomial_map, DegreeMatrix};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomial_value() {
        let f = monomial_map(DegreeMatrix::new(1, 1, 1, 2).unwrap());
        let v = eval_affine(&f, c(2.0, 0.0), c(3.0, 0.0), DEFAULT_INDET_TOL);
        let (x, y) = v.finite().unwrap();
        assert!((x - c(6.0, 0.0)).norm() < 1e-12 && (y - c(18.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn torus_maps_to_torus() {
        let r = |n, d| GR::real(rat(n, d));
        let f = build_map(
            vec![r(1, 2)],
            vec![r(1, 3)],
            vec![r(1, 5)],
            vec![GR::from_parts(0, 1, 1, 4), r(1, 7)],
            GR::from_parts(1, 1, 2, 1),
            GR::one(),
        )
        .unwrap();
        let nm = NumericMap::new(&f);
        for k in 0..50 {
            let z = Complex64::from_polar(1.0, 0.37 * k as f64);
            let w = Complex64::from_polar(1.0, 1.1 * k as f64 + 0.2);
            let (x, y) = nm.eval_affine(z, w, DEFAULT_INDET_TOL).finite().unwrap();
            assert!((x.norm() - 1.0).abs() < 1e-12);
            assert!((y.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn indeterminate_and_infinite_points() {
        let r = |n, d| GR::real(rat(n, d));
        let f = build_map(vec![r(1, 2)], vec![r(1, 3)], vec![r(1, 5)], vec![r(1, 4), r(1, 7)], GR::one(), GR::one())
            .unwrap();
        // zero line of A meets pole line of B at (a, 1/conj(b))
        let v = eval_affine(&f, c(0.5, 0.0), c(3.0, 0.0), DEFAULT_INDET_TOL);
        assert_eq!(v, AffineValue::Indeterminate);
        // a generic point of the pole line of A goes to [1:0:0]
        match eval_affine(&f, c(2.0, 0.0), c(0.3, 0.1), DEFAULT_INDET_TOL) {
            AffineValue::AtInfinity(p) => {
                assert!((p[0].norm() - 1.0).abs() < 1e-12);
                assert!(p[1].norm() < 1e-9);
            }
            other => panic!("expected a point at infinity, got {other:?}"),
        }
    }

    #[test]
    fn jacobian_is_finite_at_zeros() {
        let r = |n, d| GR::real(rat(n, d));
        let f = build_map(vec![r(1, 2), r(-1, 3)], vec![r(1, 3)], vec![r(1, 5)], vec![r(1, 4)], GR::one(), GR::one())
            .unwrap();
        let nm = NumericMap::new(&f);
        let (z, w) = (c(0.5, 0.0), c(0.25, 0.0));
        let j = nm.jacobian(z, w);
        assert!(j.iter().flatten().all(|x| x.is_finite()));
        let h = 1e-7;
        let (a0, c0) = nm.eval(z, w);
        let (a1, c1) = nm.eval(z + h, w);
        assert!(((a1 - a0) / h - j[0][0]).norm() < 1e-6);
        let (_, c2) = nm.eval(z, w + h);
        assert!(((c2 - c0) / h - j[1][1]).norm() < 1e-6);
        assert!(((c1 - c0) / h - j[1][0]).norm() < 1e-6);
    }
}
