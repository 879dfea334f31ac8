//! Iterates, their algebraic degrees, and the dynamical degree.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use nalgebra::Matrix3;
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::arith::gaussian::numerator_over;
use crate::arith::intpoly::dense_len;
use crate::arith::{gcd_cofactors_int, Exp, GaussInt, IntPoly, TermBudget, TriPoly, GR};
use crate::blaschke::{factored_lift, Blaschke2D, DegreeMatrix, FactoredMap, HomogeneousMap, LinearForm};
use crate::error::{Error, Result};

/// Components of `h` over one common integer denominator (dropped: it is a
/// projective scalar).
fn integer_components(h: &HomogeneousMap) -> [IntPoly; 3] {
    let ints: Vec<(IntPoly, BigInt)> = h.f.iter().map(IntPoly::from_tripoly).collect();
    let den = ints.iter().fold(BigInt::one(), |acc, (_, d)| acc.lcm(d));
    let scaled: Vec<IntPoly> = ints
        .into_iter()
        .map(|(p, d)| if d == den { p } else { p.scale_int(&(&den / &d)) })
        .collect();
    scaled.try_into().expect("three components")
}

fn common_denominator<'a, I: IntoIterator<Item = &'a GR>>(cs: I) -> BigInt {
    cs.into_iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()))
}

fn reduce_int(f: [IntPoly; 3]) -> Result<HomogeneousMap> {
    let res = gcd_cofactors_int(&f)?;
    let [a, b, c]: [TriPoly; 3] = res.cofactors.try_into().expect("three cofactors");
    Ok(HomogeneousMap::new([a, b, c]))
}

/// `g∘h` with the common factor of the three components removed.
///
/// Monomials `F1^i F2^j F3^k` of `h` are built once and shared by all three
/// components of `g`.
pub fn compose_reduce(g: &HomogeneousMap, h: &HomogeneousMap, budget: &TermBudget) -> Result<HomogeneousMap> {
    let d = g.degree() * h.degree();
    budget.check(3 * dense_len(d))?;
    let hs = integer_components(h);
    let den = common_denominator(g.f.iter().flat_map(|p| p.terms().values()));

    let mut cache: HashMap<Exp, IntPoly> = HashMap::new();
    cache.insert([0, 0, 0], IntPoly::one());
    let mut out: Vec<IntPoly> = Vec::with_capacity(3);
    for gc in &g.f {
        let mut acc = IntPoly::zero(d);
        for (e, c) in gc.terms() {
            let p = subproduct(&mut cache, &hs, *e);
            acc.add_scaled(&numerator_over(c, &den), &p);
        }
        out.push(acc);
    }
    reduce_int(out.try_into().expect("three components"))
}

fn subproduct(cache: &mut HashMap<Exp, IntPoly>, hs: &[IntPoly; 3], e: Exp) -> IntPoly {
    if let Some(p) = cache.get(&e) {
        return p.clone();
    }
    let k = (0..3).find(|&k| e[k] > 0).expect("nonzero exponent");
    let mut prev = e;
    prev[k] -= 1;
    let p = subproduct(cache, hs, prev).mul(&hs[k]);
    cache.insert(e, p.clone());
    p
}

/// `f∘h` for `f` in factored form: each component is a product of linear
/// combinations of the components of `h`.
pub fn compose_factored(f: &FactoredMap, h: &HomogeneousMap, budget: &TermBudget) -> Result<HomogeneousMap> {
    let d = f.degree() * h.degree();
    budget.check(3 * dense_len(d))?;
    let hs = integer_components(h);

    let mut forms: HashMap<&LinearForm, (IntPoly, BigInt)> = HashMap::new();
    let mut sigma: Vec<GR> = Vec::with_capacity(3);
    let mut prods: Vec<IntPoly> = Vec::with_capacity(3);
    for k in 0..3 {
        let mut s = f.scalars[k].clone();
        let mut acc: Option<IntPoly> = None;
        for l in &f.forms[k] {
            let (lh, kl) = forms.entry(l).or_insert_with(|| {
                let den = common_denominator(l.0.iter());
                let terms: Vec<(GaussInt, &IntPoly)> =
                    l.0.iter().zip(hs.iter()).map(|(c, p)| (numerator_over(c, &den), p)).collect();
                (IntPoly::linear_combination(&terms), den)
            });
            s = &s * &GR::real(crate::arith::Rational::new(BigInt::one(), kl.clone()));
            acc = Some(match acc {
                None => lh.clone(),
                Some(a) => a.mul(lh),
            });
        }
        sigma.push(s);
        prods.push(acc.unwrap_or_else(IntPoly::one));
    }
    // one integer scaling for all three components
    let den = common_denominator(sigma.iter());
    let out: Vec<IntPoly> = prods
        .into_iter()
        .zip(&sigma)
        .map(|(p, s)| {
            let k = numerator_over(s, &den);
            let mut r = IntPoly::zero(p.degree);
            r.add_scaled(&k, &p);
            r
        })
        .collect();
    reduce_int(out.try_into().expect("three components"))
}

/// Algebraic degrees of the first iterates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeSequence {
    /// `degrees[k - 1]` is the degree of the `k`-th iterate.
    pub degrees: Vec<u64>,
    /// First iterate that could not be computed within the budget.
    pub truncated_at: Option<u32>,
}

impl DegreeSequence {
    pub fn complete(degrees: Vec<u64>) -> Self {
        DegreeSequence {
            degrees,
            truncated_at: None,
        }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// `d_{j+k} <= d_j d_k` for all available indices.
    pub fn is_submultiplicative(&self) -> bool {
        let d = &self.degrees;
        (0..d.len()).all(|j| (0..d.len() - j - 1).all(|k| d[j + k + 1] <= d[j] * d[k]))
    }
}

/// Exact reduced degrees of `f, f^2, ..., f^n_max`.
///
/// Exhausting the budget is not an error: the sequence computed so far is
/// returned with `truncated_at` set.
pub fn degree_sequence(f: &Blaschke2D, n_max: u32, budget: &TermBudget) -> Result<DegreeSequence> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let (fm, _) = factored_lift(f);
    let mut h = fm.expand();
    let mut degrees = vec![h.degree() as u64];
    for k in 2..=n_max {
        match compose_factored(&fm, &h, budget) {
            Ok(next) => h = next,
            Err(Error::ResourceBudget { .. }) => {
                return Ok(DegreeSequence {
                    degrees,
                    truncated_at: Some(k),
                })
            }
            Err(e) => return Err(e),
        }
        degrees.push(h.degree() as u64);
    }
    Ok(DegreeSequence::complete(degrees))
}

/// Degrees of the iterates of the monomial map: the largest row sum of `N^k`.
pub fn monomial_degrees(n: DegreeMatrix, n_max: u32) -> DegreeSequence {
    let mut degrees = Vec::with_capacity(n_max as usize);
    for k in 1..=n_max {
        let p = n.pow(k);
        let row = (p[0][0] + p[0][1]).max(p[1][0] + p[1][1]);
        match u64::try_from(row) {
            Ok(d) => degrees.push(d),
            Err(_) => {
                return DegreeSequence {
                    degrees,
                    truncated_at: Some(k),
                }
            }
        }
    }
    DegreeSequence::complete(degrees)
}

/// `(trace + sqrt(disc)) / 2`, the larger root of `x^2 - trace x + det`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticSurd {
    pub trace: i64,
    pub disc: i64,
    pub det: i64,
}

impl QuadraticSurd {
    pub fn value(&self) -> f64 {
        (self.trace as f64 + (self.disc as f64).sqrt()) / 2.0
    }

    /// Integer square root of `disc` when it is a perfect square.
    pub fn exact_sqrt(&self) -> Option<i64> {
        let r = self.disc.sqrt();
        (r * r == self.disc).then_some(r)
    }

    /// `x^2 - trace x + det` at an integer.
    pub fn char_poly_at(&self, x: i64) -> i64 {
        x * x - self.trace * x + self.det
    }

    /// Exact comparison with an integer.
    pub fn cmp_int(&self, k: i64) -> Ordering {
        // c > k  iff  sqrt(disc) > 2k - trace
        let rhs = 2 * k - self.trace;
        if rhs < 0 {
            return Ordering::Greater;
        }
        self.disc.cmp(&(rhs * rhs))
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact_sqrt() {
            Some(r) => write!(f, "{}", (self.trace + r) / 2),
            None => write!(f, "({}+sqrt({}))/2", self.trace, self.disc),
        }
    }
}

/// The dynamical degree of a generic map with degree matrix `N`.
pub fn c_plus(n: DegreeMatrix) -> QuadraticSurd {
    let [[m, nn], [p, q]] = n.rows();
    QuadraticSurd {
        trace: m + q,
        disc: (m - q) * (m - q) + 4 * nn * p,
        det: n.det(),
    }
}

/// Action on the classes `{L_v, E_[0:1:0], E_[1:0:0]}` of the blown-up plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyAction {
    pub m: [[i64; 3]; 3],
}

impl CohomologyAction {
    pub fn trace(&self) -> i64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn det(&self) -> i64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Characteristic polynomial `det(x I - M)`, lowest degree first.
    pub fn char_poly(&self) -> [i64; 4] {
        let m = &self.m;
        let minors = (m[0][0] * m[1][1] - m[0][1] * m[1][0])
            + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
            + (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
        [-self.det(), minors, -self.trace(), 1]
    }

    pub fn apply(&self, v: [i128; 3]) -> Option<[i128; 3]> {
        let mut out = [0i128; 3];
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = 0i128;
            for (c, x) in v.iter().enumerate() {
                acc = acc.checked_add((self.m[r][c] as i128).checked_mul(*x)?)?;
            }
            *o = acc;
        }
        Some(out)
    }

    /// Largest eigenvalue modulus, computed in floating point.
    pub fn spectral_radius(&self) -> f64 {
        let m = Matrix3::from_fn(|r, c| self.m[r][c] as f64);
        m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn pullback_matrix(n: DegreeMatrix) -> CohomologyAction {
    let [[m, nn], [p, q]] = n.rows();
    CohomologyAction {
        m: [[m + nn, p + q, m + nn], [nn, q, nn], [-nn, -q, -nn]],
    }
}

/// First component of `M^k (1, 1, 0)`, the degree of the `k`-th iterate of a
/// map with generic zeros. Not valid for monomial maps.
pub fn predicted_degrees(n: DegreeMatrix, n_max: u32) -> DegreeSequence {
    let m = pullback_matrix(n);
    let mut v = [1i128, 1, 0];
    let mut degrees = Vec::with_capacity(n_max as usize);
    for k in 1..=n_max {
        let next = m.apply(v).and_then(|nv| u64::try_from(nv[0]).ok().map(|d| (nv, d)));
        match next {
            Some((nv, d)) => {
                v = nv;
                degrees.push(d);
            }
            None => {
                return DegreeSequence {
                    degrees,
                    truncated_at: Some(k),
                }
            }
        }
    }
    DegreeSequence::complete(degrees)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Lambda1Estimate {
    /// `d_n / d_(n-1)` at the last index.
    pub ratio: f64,
    /// `d_n^(1/n)` at the last index.
    pub root: f64,
    pub n: usize,
}

pub fn estimate_lambda1(seq: &DegreeSequence) -> Result<Lambda1Estimate> {
    let d = &seq.degrees;
    if d.len() < 2 {
        return Err(Error::InvalidArgument("need at least two degrees".into()));
    }
    let n = d.len();
    let last = d[n - 1].to_f64().unwrap_or(f64::INFINITY);
    Ok(Lambda1Estimate {
        ratio: last / d[n - 2] as f64,
        root: last.powf(1.0 / n as f64),
        n,
    })
}
