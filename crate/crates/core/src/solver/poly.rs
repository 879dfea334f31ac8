//! Dense complex polynomials and their roots.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative magnitude below which a leading coefficient is dropped.
pub const TRIM_REL: f64 = 1e-14;

/// Lowest degree first; the leading coefficient is nonzero after trimming.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    /// Drops leading coefficients below `TRIM_REL` times the largest one.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self::trimmed(coeffs, TRIM_REL)
    }

    pub fn trimmed(mut coeffs: Vec<Complex64>, rel: f64) -> Self {
        let big = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        while coeffs.last().is_some_and(|c| c.norm() <= rel * big) {
            coeffs.pop();
        }
        ComplexPoly { coeffs }
    }

    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &x) in c.iter().enumerate() {
                next[i + 1] += x;
                next[i] -= r * x;
            }
            c = next;
        }
        ComplexPoly::new(c)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// Value and derivative by Horner's rule.
    pub fn eval_with_derivative(&self, x: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut d = zero;
        for &c in self.coeffs.iter().rev() {
            d = d * x + p;
            p = p * x + c;
        }
        (p, d)
    }

    /// `sum |c_i| |x|^i`, the scale against which `|p(x)|` is judged.
    pub fn abs_eval(&self, x: Complex64) -> f64 {
        let r = x.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// `|p(x)| / sum |c_i| |x|^i`.
    pub fn relative_residual(&self, x: Complex64) -> f64 {
        let s = self.abs_eval(x);
        if s == 0.0 {
            0.0
        } else {
            self.eval(x).norm() / s
        }
    }
}

/// Largest relative residual accepted for a root.
pub const ROOT_RESIDUAL: f64 = 1e-10;

/// All roots with multiplicity, by Aberth–Ehrlich iteration and a final
/// Newton polish.
pub fn univariate_roots(p: &ComplexPoly) -> Result<Vec<Complex64>> {
    let n = match p.degree() {
        None | Some(0) => return Err(Error::InvalidArgument("root finding needs degree >= 1".into())),
        Some(n) => n,
    };
    let c = p.coeffs();
    if n == 1 {
        return Ok(vec![-c[0] / c[1]]);
    }
    // Fujiwara-type radius for the initial circle
    let lead = c[n].norm();
    let radius = (0..n)
        .map(|i| (c[i].norm() / lead).powf(1.0 / (n - i) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    for _ in 0..1000 {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (v, d) = p.eval_with_derivative(z[k]);
            if v.norm() <= f64::EPSILON * p.abs_eval(z[k]) {
                done[k] = true;
                continue;
            }
            let ratio = v / d;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| 1.0 / (z[k] - z[j]))
                .sum();
            let step = ratio / (1.0 - ratio * sum);
            if !step.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(1e-300) {
                done[k] = true;
            }
        }
        if done.iter().all(|&d| d) {
            break;
        }
    }
    for r in z.iter_mut() {
        polish(p, r);
    }
    let worst = z.iter().map(|&r| p.relative_residual(r)).fold(0.0, f64::max);
    if !worst.is_finite() || worst > ROOT_RESIDUAL {
        return Err(Error::NonConvergence(format!(
            "polynomial roots: relative residual {worst:e} after iteration"
        )));
    }
    Ok(z)
}

/// Newton steps that are kept only while they reduce the residual.
fn polish(p: &ComplexPoly, r: &mut Complex64) {
    for _ in 0..3 {
        let (v, d) = p.eval_with_derivative(*r);
        if d.norm() == 0.0 {
            return;
        }
        let next = *r - v / d;
        if next.is_finite() && p.eval(next).norm() < v.norm() {
            *r = next;
        } else {
            return;
        }
    }
}

/// Groups roots lying within `radius` (relative to `max(1, |x|)`) of one another.
pub fn cluster_roots(roots: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    for &r in roots {
        match clusters
            .iter_mut()
            .find(|(c, _)| (r - *c).norm() <= radius * r.norm().max(1.0))
        {
            Some((c, members)) => {
                members.push(r);
                *c = members.iter().sum::<Complex64>() / members.len() as f64;
            }
            None => clusters.push((r, vec![r])),
        }
    }
    clusters.into_iter().map(|(c, m)| (c, m.len())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic() {
        let p = ComplexPoly::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let mut r = univariate_roots(&p).unwrap();
        r.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn triple_root_is_a_cluster() {
        let p = ComplexPoly::from_roots(&[c(0.5, 0.0); 3]);
        let r = univariate_roots(&p).unwrap();
        let cl = cluster_roots(&r, 1e-4);
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].1, 3);
        assert!((cl[0].0 - c(0.5, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn random_degree_twelve_satisfies_vieta() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let coeffs: Vec<Complex64> = (0..13)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let p = ComplexPoly::new(coeffs.clone());
        let roots = univariate_roots(&p).unwrap();
        assert_eq!(roots.len(), 12);
        // rebuild from the roots and compare with the monic coefficients
        let q = ComplexPoly::from_roots(&roots);
        for (a, b) in q.coeffs().iter().zip(&coeffs) {
            assert!((a - b / coeffs[12]).norm() < 1e-8);
        }
    }

    #[test]
    fn trims_tiny_leading_terms() {
        let p = ComplexPoly::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-16, 0.0)]);
        assert_eq!(p.degree(), Some(1));
        assert!(ComplexPoly::new(vec![]).is_zero());
    }
}
