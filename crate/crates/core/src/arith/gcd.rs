//! Exact gcd of homogeneous polynomials over the Gaussian rationals.
//!
//! The common power of `T` is split off first; the rest is dehomogenized at
//! `T = 1` and handled by a multi-modular bivariate algorithm. Each prime
//! `p = 1 (mod 4)` gives two embeddings `i -> +-sqrt(-1)`, from which real and
//! imaginary parts of every coefficient are recovered separately. Results are
//! lifted by CRT and rational reconstruction and accepted only after an exact
//! multiplication check, so the answer never depends on a lucky prime.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::gaussian::{Rational, GR};
use super::intpoly::{dense_len, tri_index, tri_pairs, IntPoly};
use super::modp::{mulmod, powmod, Field, PrimeStream};
use super::modular::{bi_trim, gcd_cofactors_modp, lex_leading, BiPoly};
use super::tripoly::TriPoly;
use crate::error::{Error, Result};

/// Upper limit on the number of primes before giving up.
pub const MAX_PRIMES: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct GcdCofactors {
    /// Normalized so that the lex-leading coefficient is 1.
    pub gcd: TriPoly,
    /// `inputs[i] = gcd * cofactors[i]`.
    pub cofactors: Vec<TriPoly>,
}

/// Gcd of two homogeneous polynomials, normalized to lex-leading coefficient 1.
pub fn poly_gcd(a: &TriPoly, b: &TriPoly) -> Result<TriPoly> {
    Ok(gcd_cofactors(&[a.clone(), b.clone()])?.gcd)
}

/// Gcd of any number of homogeneous polynomials together with the cofactors.
pub fn gcd_cofactors(polys: &[TriPoly]) -> Result<GcdCofactors> {
    let ints: Vec<(IntPoly, BigInt)> = polys.iter().map(IntPoly::from_tripoly).collect();
    let plain: Vec<IntPoly> = ints.iter().map(|(p, _)| p.clone()).collect();
    let mut res = gcd_cofactors_int(&plain)?;
    for (q, (_, den)) in res.cofactors.iter_mut().zip(&ints) {
        if !den.is_one() {
            *q = q.scale(&GR::real(Rational::new(BigInt::one(), den.clone())));
        }
    }
    Ok(res)
}

/// Same as [`gcd_cofactors`] for inputs already in Gaussian-integer form.
pub fn gcd_cofactors_int(polys: &[IntPoly]) -> Result<GcdCofactors> {
    let nonzero: Vec<usize> = (0..polys.len()).filter(|&i| !polys[i].is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::ZeroGcd);
    }
    let vals: Vec<u32> = polys.iter().map(|p| p.t_valuation()).collect();
    let v = nonzero.iter().map(|&i| vals[i]).min().unwrap_or(0);
    let stripped: Vec<IntPoly> = nonzero.iter().map(|&i| polys[i].div_t_pow(vals[i])).collect();

    let (g, qs) = if stripped.len() == 1 {
        let s = stripped[0].to_tripoly(&BigInt::one());
        let lc = s.leading().map(|(_, c)| c.clone()).unwrap_or_else(GR::one);
        (s.normalized(), vec![TriPoly::constant(lc)])
    } else if stripped.iter().any(|s| s.degree == 0) {
        let qs = stripped.iter().map(|s| s.to_tripoly(&BigInt::one())).collect();
        (TriPoly::one(), qs)
    } else {
        modular_gcd(stripped)?
    };

    let gcd = g.mul_t_pow(v);
    let mut cofactors = Vec::with_capacity(polys.len());
    let mut it = qs.into_iter();
    for (i, p) in polys.iter().enumerate() {
        if p.is_zero() {
            cofactors.push(TriPoly::zero(p.degree.saturating_sub(gcd.degree())));
        } else {
            cofactors.push(it.next().expect("one cofactor per input").mul_t_pow(vals[i] - v));
        }
    }
    Ok(GcdCofactors { gcd, cofactors })
}

/// Dehomogenized integer image of one input.
struct Prepared {
    degree: u32,
    int: IntPoly,
    /// lex-leading exponent `(Z, W)` of the dehomogenized polynomial
    lead: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Shape {
    degree: u32,
    lead: (usize, usize),
}

impl Shape {
    /// True if `self` is a more trustworthy image than `other`. Unlucky primes
    /// only ever raise the degree or lower the leading exponent.
    fn better_than(&self, other: &Shape) -> bool {
        self.degree < other.degree || (self.degree == other.degree && self.lead > other.lead)
    }
}

/// Images of gcd and cofactors for one prime, as standard residues of the real
/// and imaginary parts in dense triangular layout.
struct PrimeImage {
    p: u64,
    shape: Shape,
    re: Vec<u64>,
    im: Vec<u64>,
}

fn modular_gcd(inputs: Vec<IntPoly>) -> Result<(TriPoly, Vec<TriPoly>)> {
    let prepared: Vec<Prepared> = inputs
        .into_iter()
        .map(|int| {
            let (a, b) = int.lead_exponent().expect("nonzero input");
            Prepared {
                degree: int.degree,
                int,
                lead: (a as usize, b as usize),
            }
        })
        .collect();

    let mut primes = PrimeStream::new();
    let batch = rayon::current_num_threads().clamp(1, 8);
    let mut best: Option<Shape> = None;
    let mut acc = Crt::default();
    let mut candidate: Option<Vec<Rational>> = None;
    let mut next_attempt = 1usize;
    let mut used = 0usize;

    while used < MAX_PRIMES {
        let ps: Vec<u64> = primes.by_ref().take(batch).collect();
        let images: Vec<Option<PrimeImage>> =
            ps.par_iter().map(|&p| image_mod_p(p, &prepared)).collect();
        for img in images.into_iter().flatten() {
            used += 1;
            match best {
                Some(b) if b.better_than(&img.shape) => continue,
                Some(b) if img.shape.better_than(&b) => {
                    acc = Crt::default();
                    candidate = None;
                    next_attempt = 1;
                }
                _ => {}
            }
            best = Some(img.shape);

            if let Some(cand) = &candidate {
                if agrees(cand, &img) {
                    if let Some(out) = verify(cand, img.shape, &prepared) {
                        return Ok(out);
                    }
                }
                candidate = None;
            }
            acc.push(&img);
            if acc.count >= next_attempt {
                next_attempt = (next_attempt * 3).div_ceil(2).max(acc.count + 1);
                candidate = acc.reconstruct();
            }
        }
    }
    Err(Error::ReconstructionFailed { primes: used })
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

fn to_bipoly(f: &Field, prep: &Prepared, re: &[u64], im: &[u64], sign: bool) -> BiPoly {
    let d = prep.degree as usize;
    let mut out: BiPoly = vec![vec![0; d + 1]; d + 1];
    let iota = if sign { f.iota() } else { f.neg(f.iota()) };
    for (k, (a, b)) in tri_pairs(prep.degree).enumerate() {
        if re[k] == 0 && im[k] == 0 {
            continue;
        }
        let val = f.add(f.from_u64(re[k]), f.mul(iota, f.from_u64(im[k])));
        out[b as usize][a as usize] = val;
    }
    bi_trim(&mut out);
    out
}

fn image_mod_p(p: u64, prepared: &[Prepared]) -> Option<PrimeImage> {
    let f = Field::new(p);
    let mut runs = Vec::with_capacity(2);
    let residues: Vec<(Vec<u64>, Vec<u64>)> = prepared
        .iter()
        .map(|prep| {
            let re = prep.int.coeffs.iter().map(|c| reduce(&c.re, p)).collect();
            let im = prep.int.coeffs.iter().map(|c| reduce(&c.im, p)).collect();
            (re, im)
        })
        .collect();
    for sign in [true, false] {
        let bis: Vec<BiPoly> = prepared
            .iter()
            .zip(&residues)
            .map(|(prep, (re, im))| to_bipoly(&f, prep, re, im, sign))
            .collect();
        // reject primes that kill a leading coefficient
        for (bi, prep) in bis.iter().zip(prepared) {
            let lead = lex_leading(bi).map(|(i, j, _)| (i, j));
            if lead != Some(prep.lead) {
                return None;
            }
        }
        let res = gcd_cofactors_modp(&f, &bis)?;
        runs.push(res);
    }
    let (lead_a, lead_b) = (lex_leading(&runs[0].gcd)?, lex_leading(&runs[1].gcd)?);
    let gdeg = total_degree(&runs[0].gcd);
    if (lead_a.0, lead_a.1) != (lead_b.0, lead_b.1) || gdeg != total_degree(&runs[1].gcd) {
        return None;
    }
    let shape = Shape {
        degree: gdeg,
        lead: (lead_a.0, lead_a.1),
    };

    // decode real and imaginary parts: x = u + i v maps to u +- iota v
    let half = f.inv(f.from_u64(2));
    let inv_2iota = f.inv(f.mul(f.from_u64(2), f.iota()));
    let mut re = Vec::new();
    let mut im = Vec::new();
    let mut emit = |a: &BiPoly, b: &BiPoly, degree: u32| -> bool {
        let n = dense_len(degree);
        let start = re.len();
        re.resize(start + n, 0);
        im.resize(start + n, 0);
        let width = a.len().max(b.len());
        for j in 0..width {
            let cx = a.get(j).map(|c| c.as_slice()).unwrap_or(&[]);
            let cy = b.get(j).map(|c| c.as_slice()).unwrap_or(&[]);
            for i in 0..cx.len().max(cy.len()) {
                let g1 = cx.get(i).copied().unwrap_or(0);
                let g2 = cy.get(i).copied().unwrap_or(0);
                if g1 == 0 && g2 == 0 {
                    continue;
                }
                if (i + j) as u32 > degree {
                    return false;
                }
                let k = start + tri_index(degree, i as u32, j as u32);
                re[k] = f.to_u64(f.mul(f.add(g1, g2), half));
                im[k] = f.to_u64(f.mul(f.sub(g1, g2), inv_2iota));
            }
        }
        true
    };
    if !emit(&runs[0].gcd, &runs[1].gcd, gdeg) {
        return None;
    }
    for (k, prep) in prepared.iter().enumerate() {
        let qdeg = prep.degree.checked_sub(gdeg)?;
        if !emit(&runs[0].cofactors[k], &runs[1].cofactors[k], qdeg) {
            return None;
        }
    }
    Some(PrimeImage { p, shape, re, im })
}

fn total_degree(a: &BiPoly) -> u32 {
    a.iter()
        .enumerate()
        .filter_map(|(j, c)| super::modp::udeg(c).map(|i| (i + j) as u32))
        .max()
        .unwrap_or(0)
}

/// Incremental Chinese remaindering of a vector of residues.
#[derive(Default)]
struct Crt {
    count: usize,
    modulus: BigInt,
    re: Vec<BigInt>,
    im: Vec<BigInt>,
}

impl Crt {
    fn push(&mut self, img: &PrimeImage) {
        let p = img.p;
        if self.count == 0 {
            self.modulus = BigInt::from(p);
            self.re = img.re.iter().map(|&x| BigInt::from(x)).collect();
            self.im = img.im.iter().map(|&x| BigInt::from(x)).collect();
            self.count = 1;
            return;
        }
        let m_mod_p = reduce(&self.modulus, p);
        let m_inv = powmod(m_mod_p, p - 2, p);
        let step = |acc: &mut BigInt, r: u64, modulus: &BigInt| {
            let cur = reduce(acc, p);
            let diff = if r >= cur { r - cur } else { r + p - cur };
            let t = mulmod(diff, m_inv, p);
            if t != 0 {
                *acc += modulus * BigInt::from(t);
            }
        };
        for (a, &r) in self.re.iter_mut().zip(&img.re) {
            step(a, r, &self.modulus);
        }
        for (a, &r) in self.im.iter_mut().zip(&img.im) {
            step(a, r, &self.modulus);
        }
        self.modulus *= BigInt::from(p);
        self.count += 1;
    }

    /// Rational reconstruction of every entry, sharing a running denominator.
    fn reconstruct(&self) -> Option<Vec<Rational>> {
        let bound = (&self.modulus >> 1usize).sqrt();
        let mut den = BigInt::one();
        let mut out = Vec::with_capacity(self.re.len() * 2);
        for r in self.re.iter().chain(self.im.iter()) {
            let s = symmetric(&((r * &den) % &self.modulus), &self.modulus);
            if s.abs() <= bound {
                out.push(Rational::new(s, den.clone()));
                continue;
            }
            let (n, d) = wang(&s, &self.modulus, &bound)?;
            let full = &d * &den;
            out.push(Rational::new(n, full.clone()));
            den = full;
        }
        Some(out)
    }
}

fn symmetric(r: &BigInt, m: &BigInt) -> BigInt {
    let r = r.mod_floor(m);
    if &r + &r > *m {
        r - m
    } else {
        r
    }
}

/// `n/d = r (mod m)` with `|n|, d <= bound`, if it exists.
fn wang(r: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.sign() == Sign::Minus {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

fn agrees(cand: &[Rational], img: &PrimeImage) -> bool {
    let p = img.p;
    let n = img.re.len();
    cand.iter().enumerate().all(|(k, q)| {
        let expect = if k < n { img.re[k] } else { img.im[k - n] };
        let d = reduce(q.denom(), p);
        if d == 0 {
            return false;
        }
        let val = mulmod(reduce(q.numer(), p), powmod(d, p - 2, p), p);
        val == expect
    })
}

fn tripoly_from_dense(degree: u32, re: &[Rational], im: &[Rational]) -> TriPoly {
    let terms = tri_pairs(degree)
        .zip(re.iter().zip(im))
        .map(|((i, j), (a, b))| ([i, j, degree - i - j], GR::new(a.clone(), b.clone())));
    TriPoly::from_terms(degree, terms)
}

/// Splits a candidate into gcd and cofactors and checks `gcd * q_i == input_i` exactly.
fn verify(cand: &[Rational], shape: Shape, prepared: &[Prepared]) -> Option<(TriPoly, Vec<TriPoly>)> {
    let half = cand.len() / 2;
    let (re, im) = cand.split_at(half);
    let mut offset = 0;
    let mut take = |degree: u32| {
        let n = dense_len(degree);
        let p = tripoly_from_dense(degree, &re[offset..offset + n], &im[offset..offset + n]);
        offset += n;
        p
    };
    let g = take(shape.degree);
    let qs: Vec<TriPoly> = prepared.iter().map(|prep| take(prep.degree - shape.degree)).collect();
    let (g_int, g_den) = IntPoly::from_tripoly(&g);
    let ok = qs.par_iter().zip(prepared.par_iter()).all(|(q, prep)| {
        let (q_int, q_den) = IntPoly::from_tripoly(q);
        let lhs = q_int.mul(&g_int);
        let rhs = prep.int.scale_int(&(&q_den * &g_den));
        lhs == rhs
    });
    if !ok {
        return None;
    }
    Some((g, qs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gaussian::rat;

    fn lin(cz: GR, cw: GR, ct: GR) -> TriPoly {
        TriPoly::linear(cz, cw, ct)
    }
    fn c(n: i64, d: i64) -> GR {
        GR::real(rat(n, d))
    }

    #[test]
    fn gcd_of_monomials() {
        let zw = TriPoly::var_z().mul(&TriPoly::var_w());
        let z2 = TriPoly::var_z().pow(2);
        assert_eq!(poly_gcd(&zw, &z2).unwrap(), TriPoly::var_z());
    }

    #[test]
    fn shared_linear_factor() {
        let t = TriPoly::var_t();
        let z = TriPoly::var_z();
        let a = z.mul(&z).sub(&t.mul(&t).scale(&c(1, 4)));
        let b = z.sub(&t.scale(&c(1, 2)));
        assert_eq!(poly_gcd(&a, &b).unwrap(), b);
    }

    #[test]
    fn gaussian_coefficients_and_cofactors() {
        let g = lin(GR::from_parts(1, 3, 2, 5), GR::one(), GR::from_parts(0, 1, -1, 7));
        let g2 = lin(GR::one(), GR::from_parts(3, 4, 1, 2), c(-2, 9));
        let r1 = lin(GR::from_parts(1, 2, 1, 2), c(5, 1), GR::zero()).pow(2);
        let r2 = lin(c(1, 1), GR::from_parts(0, 1, 1, 1), c(1, 3)).mul(&TriPoly::var_t());
        let common = g.mul(&g2);
        let a = common.mul(&r1);
        let b = common.mul(&r2);
        let res = gcd_cofactors(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(res.gcd, common.normalized());
        assert_eq!(res.gcd.mul(&res.cofactors[0]), a);
        assert_eq!(res.gcd.mul(&res.cofactors[1]), b);
    }

    #[test]
    fn zero_inputs() {
        assert_eq!(gcd_cofactors(&[TriPoly::zero(2)]), Err(Error::ZeroGcd));
        let z = TriPoly::var_z().scale(&c(3, 1));
        let res = gcd_cofactors(&[TriPoly::zero(3), z.clone()]).unwrap();
        assert_eq!(res.gcd, TriPoly::var_z());
        assert!(res.cofactors[0].is_zero());
        assert_eq!(res.gcd.mul(&res.cofactors[1]), z);
    }

    #[test]
    fn powers_of_t_are_split_off() {
        let t = TriPoly::var_t();
        let a = TriPoly::var_z().mul(&TriPoly::var_w()).mul(&t.pow(3));
        let b = TriPoly::var_z().mul(&TriPoly::var_w().pow(2)).mul(&t.pow(2));
        let f3 = t.pow(5);
        let res = gcd_cofactors(&[a, b, f3]).unwrap();
        assert_eq!(res.gcd, t.pow(2));
        assert_eq!(res.cofactors[2], t.pow(3));
    }

    #[test]
    fn rational_reconstruction() {
        let m = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        let bound = (&m >> 1usize).sqrt();
        let d = BigInt::from(12345);
        let n = BigInt::from(-677);
        let r = (&n * d.modinv(&m).unwrap()).mod_floor(&m);
        assert_eq!(wang(&r, &m, &bound), Some((n, d)));
    }
}
