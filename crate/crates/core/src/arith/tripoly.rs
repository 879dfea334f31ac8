use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::gaussian::GR;
use super::intpoly::{dense_len, IntPoly};
use crate::error::{Error, Result};

/// Exponent triple `(i, j, k)` of the monomial `Z^i W^j T^k`.
///
/// The derived ordering is lexicographic, so the last key of a term map is
/// the lex-leading monomial.
pub type Exp = [u32; 3];

/// Optional cap on the number of terms an operation may produce.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TermBudget {
    pub max_terms: Option<usize>,
}

impl TermBudget {
    pub const UNLIMITED: TermBudget = TermBudget { max_terms: None };

    pub fn limited(max_terms: usize) -> Self {
        TermBudget {
            max_terms: Some(max_terms),
        }
    }

    pub fn check(&self, needed: usize) -> Result<()> {
        match self.max_terms {
            Some(limit) if needed > limit => Err(Error::ResourceBudget { needed, limit }),
            _ => Ok(()),
        }
    }
}

/// Sparse homogeneous polynomial in `Z, W, T` over the Gaussian rationals.
///
/// Invariants: every stored coefficient is nonzero and every exponent sums to
/// `degree`. The zero polynomial has no terms but still carries a degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TriPoly {
    degree: u32,
    terms: BTreeMap<Exp, GR>,
}

impl TriPoly {
    pub fn zero(degree: u32) -> Self {
        TriPoly {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: GR) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn one() -> Self {
        Self::constant(GR::one())
    }

    pub fn monomial(c: GR, e: Exp) -> Self {
        let degree = e[0] + e[1] + e[2];
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        TriPoly { degree, terms }
    }

    /// The linear form `cz*Z + cw*W + ct*T`.
    pub fn linear(cz: GR, cw: GR, ct: GR) -> Self {
        Self::from_terms(1, [([1, 0, 0], cz), ([0, 1, 0], cw), ([0, 0, 1], ct)])
    }

    pub fn var_z() -> Self {
        Self::monomial(GR::one(), [1, 0, 0])
    }
    pub fn var_w() -> Self {
        Self::monomial(GR::one(), [0, 1, 0])
    }
    pub fn var_t() -> Self {
        Self::monomial(GR::one(), [0, 0, 1])
    }

    /// Collects terms, summing duplicates and dropping zeros.
    ///
    /// Panics if an exponent does not have total degree `degree`.
    pub fn from_terms<I: IntoIterator<Item = (Exp, GR)>>(degree: u32, terms: I) -> Self {
        let mut map: BTreeMap<Exp, GR> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e[0] + e[1] + e[2], degree, "inhomogeneous term {e:?}");
            if c.is_zero() {
                continue;
            }
            let slot = map.entry(e).or_insert_with(GR::zero);
            *slot += &c;
        }
        map.retain(|_, c| !c.is_zero());
        TriPoly { degree, terms: map }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Exp, GR> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero and of degree zero.
    pub fn is_constant(&self) -> bool {
        !self.is_zero() && self.degree == 0
    }

    pub fn coeff(&self, e: &Exp) -> GR {
        self.terms.get(e).cloned().unwrap_or_else(GR::zero)
    }

    /// Lex-leading term.
    pub fn leading(&self) -> Option<(&Exp, &GR)> {
        self.terms.iter().next_back()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms
            .keys()
            .all(|e| e[0] + e[1] + e[2] == self.degree)
    }

    pub fn scale(&self, c: &GR) -> TriPoly {
        if c.is_zero() {
            return TriPoly::zero(self.degree);
        }
        TriPoly {
            degree: self.degree,
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Divides by the lex-leading coefficient so that it becomes 1.
    pub fn normalized(&self) -> TriPoly {
        match self.leading() {
            Some((_, lc)) => self.scale(&lc.inv()),
            None => self.clone(),
        }
    }

    pub fn conj_coeffs(&self) -> TriPoly {
        TriPoly {
            degree: self.degree,
            terms: self.terms.iter().map(|(e, v)| (*e, v.conj())).collect(),
        }
    }

    fn combine(&self, rhs: &TriPoly, sign: bool) -> TriPoly {
        if self.is_zero() {
            return if sign { rhs.clone() } else { rhs.neg() };
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, rhs.degree, "adding polynomials of different degree");
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let slot = terms.entry(*e).or_insert_with(GR::zero);
            if sign {
                *slot += c;
            } else {
                *slot -= c;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        TriPoly {
            degree: self.degree,
            terms,
        }
    }

    pub fn add(&self, rhs: &TriPoly) -> TriPoly {
        self.combine(rhs, true)
    }

    pub fn sub(&self, rhs: &TriPoly) -> TriPoly {
        self.combine(rhs, false)
    }

    pub fn neg(&self) -> TriPoly {
        self.scale(&-GR::one())
    }

    /// Product with exact coefficients.
    pub fn mul(&self, rhs: &TriPoly) -> TriPoly {
        poly_mul(self, rhs)
    }

    pub fn pow(&self, e: u32) -> TriPoly {
        let mut acc = TriPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact value at `[Z, W, T]`.
    pub fn eval(&self, pt: &[GR; 3]) -> GR {
        poly_eval(self, pt)
    }

    pub fn eval_c64(&self, pt: [Complex64; 3]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            acc += c.to_c64() * pt[0].powu(e[0]) * pt[1].powu(e[1]) * pt[2].powu(e[2]);
        }
        acc
    }

    /// Largest power of `T` dividing the polynomial (0 for the zero polynomial).
    pub fn t_valuation(&self) -> u32 {
        self.terms.keys().map(|e| e[2]).min().unwrap_or(0)
    }

    /// Divides by `T^k`; panics if not divisible.
    pub fn div_t_pow(&self, k: u32) -> TriPoly {
        if k == 0 {
            return self.clone();
        }
        assert!(self.degree >= k);
        TriPoly {
            degree: self.degree - k,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    assert!(e[2] >= k, "not divisible by T^{k}");
                    ([e[0], e[1], e[2] - k], c.clone())
                })
                .collect(),
        }
    }

    pub fn mul_t_pow(&self, k: u32) -> TriPoly {
        TriPoly {
            degree: self.degree + k,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ([e[0], e[1], e[2] + k], c.clone()))
                .collect(),
        }
    }

    /// Exact quotient `self / rhs` by lexicographic division, or `None` when
    /// the remainder is nonzero.
    pub fn div_exact(&self, rhs: &TriPoly) -> Option<TriPoly> {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(TriPoly::zero(self.degree.saturating_sub(rhs.degree)));
        }
        if rhs.degree > self.degree {
            return None;
        }
        let qdeg = self.degree - rhs.degree;
        let (le, lc) = rhs.leading().map(|(e, c)| (*e, c.clone()))?;
        let lc_inv = lc.inv();
        let mut rem = self.terms.clone();
        let mut quot: BTreeMap<Exp, GR> = BTreeMap::new();
        while let Some((e, c)) = rem.iter().next_back().map(|(e, c)| (*e, c.clone())) {
            if e[0] < le[0] || e[1] < le[1] || e[2] < le[2] {
                return None;
            }
            let qe = [e[0] - le[0], e[1] - le[1], e[2] - le[2]];
            let qc = &c * &lc_inv;
            for (be, bc) in &rhs.terms {
                let te = [be[0] + qe[0], be[1] + qe[1], be[2] + qe[2]];
                let slot = rem.entry(te).or_insert_with(GR::zero);
                *slot -= &(bc * &qc);
                if slot.is_zero() {
                    rem.remove(&te);
                }
            }
            quot.insert(qe, qc);
        }
        Some(TriPoly {
            degree: qdeg,
            terms: quot,
        })
    }

    /// Formal partial derivative with respect to variable `var` (0 = Z, 1 = W, 2 = T).
    pub fn partial(&self, var: usize) -> TriPoly {
        if self.degree == 0 {
            return TriPoly::zero(0);
        }
        let terms = self.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, c)| {
            let mut ne = *e;
            ne[var] -= 1;
            (ne, c * &GR::from(e[var] as i64))
        });
        TriPoly::from_terms(self.degree - 1, terms)
    }

    /// Largest coefficient bit size.
    pub fn height_bits(&self) -> u64 {
        self.terms.values().map(|c| c.height_bits()).max().unwrap_or(0)
    }
}

/// Exact product; result degree is `deg(a) + deg(b)`.
pub fn poly_mul(a: &TriPoly, b: &TriPoly) -> TriPoly {
    let degree = a.degree + b.degree;
    if a.is_zero() || b.is_zero() {
        return TriPoly::zero(degree);
    }
    if a.len() * b.len() <= 64 {
        let mut out: BTreeMap<Exp, GR> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                let slot = out.entry(e).or_insert_with(GR::zero);
                *slot += &(ca * cb);
            }
        }
        out.retain(|_, c| !c.is_zero());
        return TriPoly { degree, terms: out };
    }
    let (ia, da) = IntPoly::from_tripoly(a);
    let (ib, db) = IntPoly::from_tripoly(b);
    ia.mul(&ib).to_tripoly(&(da * db))
}

/// Product guarded by a term budget.
pub fn poly_mul_budgeted(a: &TriPoly, b: &TriPoly, budget: &TermBudget) -> Result<TriPoly> {
    let needed = (a.len() * b.len()).min(dense_len(a.degree + b.degree));
    budget.check(needed)?;
    Ok(poly_mul(a, b))
}

/// Exact evaluation at a point of `C^3` with Gaussian-rational coordinates.
pub fn poly_eval(p: &TriPoly, pt: &[GR; 3]) -> GR {
    if p.is_zero() {
        return GR::zero();
    }
    let d = p.degree;
    let powers: Vec<Vec<GR>> = pt
        .iter()
        .map(|x| {
            let mut v = Vec::with_capacity(d as usize + 1);
            v.push(GR::one());
            for k in 1..=d as usize {
                let next = &v[k - 1] * x;
                v.push(next);
            }
            v
        })
        .collect();
    let mut acc = GR::zero();
    for (e, c) in &p.terms {
        let m = &(&powers[0][e[0] as usize] * &powers[1][e[1] as usize]) * &powers[2][e[2] as usize];
        acc += &(c * &m);
    }
    acc
}

impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = ["Z", "W", "T"]
                .iter()
                .zip(e.iter())
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TriPoly[deg {}]({self})", self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gaussian::rat;

    fn z() -> TriPoly {
        TriPoly::var_z()
    }
    fn w() -> TriPoly {
        TriPoly::var_w()
    }
    fn t() -> TriPoly {
        TriPoly::var_t()
    }
    fn c(n: i64, d: i64) -> GR {
        GR::real(rat(n, d))
    }

    #[test]
    fn monomial_product() {
        let p = z().mul(&w());
        assert_eq!(p.degree(), 2);
        assert_eq!(p, TriPoly::monomial(GR::one(), [1, 1, 0]));
    }

    #[test]
    fn difference_of_squares() {
        let a = z().sub(&t().scale(&c(1, 2)));
        let b = z().add(&t().scale(&c(1, 2)));
        let expect = z().mul(&z()).sub(&t().mul(&t()).scale(&c(1, 4)));
        assert_eq!(a.mul(&b), expect);
    }

    #[test]
    fn evaluation() {
        let zw = z().mul(&w());
        let pt = [GR::from(2), GR::from(3), GR::from(1)];
        assert_eq!(zw.eval(&pt), GR::from(6));
        let q = z().mul(&z()).sub(&t().mul(&t()).scale(&c(1, 4)));
        assert!(q.eval(&[c(1, 2), GR::zero(), GR::one()]).is_zero());
    }

    #[test]
    fn exact_division_and_failure() {
        let a = z().sub(&t().scale(&c(1, 2)));
        let b = w().add(&t().scale(&GR::from_parts(0, 1, 1, 3)));
        let prod = a.mul(&b).mul(&a);
        assert_eq!(prod.div_exact(&a).unwrap(), a.mul(&b));
        assert!(prod.div_exact(&z()).is_none());
    }

    #[test]
    fn fast_and_naive_products_agree() {
        // large enough to take the integer-form path
        let l1 = TriPoly::linear(c(1, 3), GR::from_parts(2, 5, -1, 7), c(-3, 2));
        let l2 = TriPoly::linear(GR::from_parts(0, 1, 1, 2), c(5, 6), c(1, 9));
        let p = l1.pow(4);
        let q = l2.pow(3);
        assert!(p.len() * q.len() > 64);
        let mut naive: BTreeMap<Exp, GR> = BTreeMap::new();
        for (ea, ca) in p.terms() {
            for (eb, cb) in q.terms() {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                *naive.entry(e).or_insert_with(GR::zero) += &(ca * cb);
            }
        }
        let naive = TriPoly::from_terms(7, naive);
        assert_eq!(p.mul(&q), naive);
    }

    #[test]
    fn budget_guard() {
        let l = TriPoly::linear(GR::one(), GR::one(), GR::one());
        let p = l.pow(6);
        let err = poly_mul_budgeted(&p, &p, &TermBudget::limited(10)).unwrap_err();
        assert!(matches!(err, Error::ResourceBudget { .. }));
        assert!(poly_mul_budgeted(&p, &p, &TermBudget::UNLIMITED).is_ok());
    }
}
