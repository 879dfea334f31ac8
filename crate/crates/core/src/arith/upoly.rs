use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::gaussian::GR;

/// Dense univariate polynomial over the Gaussian rationals, lowest degree first.
///
/// Invariant: no trailing zero coefficients; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<GR>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<GR>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: GR) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &GR) -> Self {
        Self::new(vec![-r, GR::one()])
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots<'a, I: IntoIterator<Item = &'a GR>>(roots: I) -> Self {
        roots
            .into_iter()
            .fold(Self::constant(GR::one()), |acc, r| acc.mul(&Self::linear_root(r)))
    }

    /// `prod (1 - conj(r) x)` over the given roots.
    pub fn from_poles<'a, I: IntoIterator<Item = &'a GR>>(roots: I) -> Self {
        roots.into_iter().fold(Self::constant(GR::one()), |acc, r| {
            acc.mul(&Self::new(vec![GR::one(), -r.conj()]))
        })
    }

    pub fn coeffs(&self) -> &[GR] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let mut out = vec![GR::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Self::new(out)
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        self.add(&rhs.scale(&-GR::one()))
    }

    pub fn scale(&self, k: &GR) -> UniPoly {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![GR::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> UniPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GR::from(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &GR) -> GR {
        let mut acc = GR::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_c64();
        }
        acc
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.to_c64()).collect()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gaussian::rat;

    #[test]
    fn roots_and_derivative() {
        let r = [GR::real(rat(1, 2)), GR::from_parts(0, 1, 1, 3)];
        let p = UniPoly::from_roots(&r);
        assert_eq!(p.degree(), Some(2));
        for x in &r {
            assert!(p.eval(x).is_zero());
        }
        // d/dx (x - a)(x - b) = 2x - a - b
        let d = p.derivative();
        assert_eq!(d.eval(&GR::zero()), -(&r[0] + &r[1]));
        let q = UniPoly::from_poles(&r);
        assert!(q.eval(&r[0].conj().inv()).is_zero());
    }
}
