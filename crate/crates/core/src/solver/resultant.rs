//! Resultants of bivariate complex polynomials by evaluation at roots of
//! unity and Sylvester determinants.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::poly::ComplexPoly;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Var {
    Z,
    W,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::Z => Var::W,
            Var::W => Var::Z,
        }
    }
}

/// `sum c[i][j] z^i w^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiComplexPoly {
    pub c: Vec<Vec<Complex64>>,
}

impl BiComplexPoly {
    /// `p(z) q(w)`.
    pub fn outer(p: &[Complex64], q: &[Complex64]) -> Self {
        BiComplexPoly {
            c: p.iter().map(|&a| q.iter().map(|&b| a * b).collect()).collect(),
        }
    }

    pub fn sub(&self, rhs: &BiComplexPoly) -> BiComplexPoly {
        let rows = self.c.len().max(rhs.c.len());
        let cols = self
            .c
            .iter()
            .chain(rhs.c.iter())
            .map(|r| r.len())
            .max()
            .unwrap_or(0);
        let get = |p: &BiComplexPoly, i: usize, j: usize| {
            p.c.get(i).and_then(|r| r.get(j)).copied().unwrap_or_default()
        };
        BiComplexPoly {
            c: (0..rows)
                .map(|i| (0..cols).map(|j| get(self, i, j) - get(rhs, i, j)).collect())
                .collect(),
        }
    }

    pub fn scale(&self, k: Complex64) -> BiComplexPoly {
        BiComplexPoly {
            c: self.c.iter().map(|r| r.iter().map(|&x| x * k).collect()).collect(),
        }
    }

    /// Highest power of `var` with a nonzero coefficient.
    pub fn degree_in(&self, var: Var) -> usize {
        let mut d = 0;
        for (i, row) in self.c.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if x.norm() > 0.0 {
                    d = d.max(if var == Var::Z { i } else { j });
                }
            }
        }
        d
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.c.iter().rev().fold(Complex64::default(), |acc, row| {
            acc * z + row.iter().rev().fold(Complex64::default(), |a, &x| a * w + x)
        })
    }

    /// `sum |c_ij| |z|^i |w|^j`.
    pub fn abs_eval(&self, z: Complex64, w: Complex64) -> f64 {
        let (rz, rw) = (z.norm(), w.norm());
        self.c.iter().rev().fold(0.0, |acc, row| {
            acc * rz + row.iter().rev().fold(0.0, |a, x| a * rw + x.norm())
        })
    }

    pub fn relative_residual(&self, z: Complex64, w: Complex64) -> f64 {
        let s = self.abs_eval(z, w);
        if s == 0.0 {
            0.0
        } else {
            self.eval(z, w).norm() / s
        }
    }

    /// Coefficients in `var` after fixing the other variable at `x`
    /// (untrimmed, length `degree_in(var) + 1`).
    pub fn specialize(&self, var: Var, x: Complex64) -> Vec<Complex64> {
        let d = self.degree_in(var);
        let mut out = vec![Complex64::default(); d + 1];
        let mut xp = Complex64::new(1.0, 0.0);
        match var {
            Var::W => {
                for row in &self.c {
                    for (j, &v) in row.iter().enumerate().take(d + 1) {
                        out[j] += v * xp;
                    }
                    xp *= x;
                }
            }
            Var::Z => {
                let cols = self.c.iter().map(|r| r.len()).max().unwrap_or(0);
                for j in 0..cols {
                    for (i, row) in self.c.iter().enumerate().take(d + 1) {
                        if let Some(&v) = row.get(j) {
                            out[i] += v * xp;
                        }
                    }
                    xp *= x;
                }
            }
        }
        out
    }
}

/// Sylvester determinant of two polynomials given by ascending coefficients
/// and formal degrees. Rows of `q` come first, so that `Res(w - z, w + z) = -2z`.
pub fn sylvester_det(p: &[Complex64], q: &[Complex64]) -> Complex64 {
    let (dp, dq) = (p.len() - 1, q.len() - 1);
    let size = dp + dq;
    if size == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut m = DMatrix::<Complex64>::zeros(size, size);
    // descending coefficients, shifted one column per row
    for r in 0..dp {
        for (k, &c) in q.iter().rev().enumerate() {
            m[(r, r + k)] = c;
        }
    }
    for r in 0..dq {
        for (k, &c) in p.iter().rev().enumerate() {
            m[(dp + r, r + k)] = c;
        }
    }
    m.determinant()
}

/// Trim threshold for the top coefficients of a resultant: a ratio beyond
/// `1e12` between the largest and the leading coefficient means a root at infinity.
pub const INFINITY_RATIO: f64 = 1e12;

/// Resultant with respect to `eliminate`, as a polynomial in the other variable.
pub fn resultant_eliminate(p1: &BiComplexPoly, p2: &BiComplexPoly, eliminate: Var) -> Result<ComplexPoly> {
    let keep = eliminate.other();
    let bound = p1.degree_in(keep) * p2.degree_in(eliminate) + p2.degree_in(keep) * p1.degree_in(eliminate);
    let n = bound + 1;
    let phase = 0.123;
    let mut values = Vec::with_capacity(n);
    let mut scale: f64 = 0.0;
    for k in 0..n {
        let x = Complex64::from_polar(1.0, phase + std::f64::consts::TAU * k as f64 / n as f64);
        let a = p1.specialize(eliminate, x);
        let b = p2.specialize(eliminate, x);
        let norm = |v: &[Complex64]| v.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let weight = norm(&a).powi(b.len() as i32 - 1) * norm(&b).powi(a.len() as i32 - 1);
        scale = scale.max(weight);
        values.push(sylvester_det(&a, &b));
    }
    // inverse DFT, undoing the phase
    let coeffs: Vec<Complex64> = (0..n)
        .map(|j| {
            let s: Complex64 = values
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let ang = -(j as f64) * (phase + std::f64::consts::TAU * k as f64 / n as f64);
                    v * Complex64::from_polar(1.0, ang)
                })
                .sum();
            s / n as f64
        })
        .collect();
    let big = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if big <= 1e-13 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateSystem("resultant vanishes identically".into()));
    }
    Ok(ComplexPoly::trimmed(coeffs, 1.0 / INFINITY_RATIO))
}
