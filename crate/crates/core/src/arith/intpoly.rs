//! Dense homogeneous polynomials with Gaussian-integer coefficients.
//!
//! This is the working representation for the expensive products: no
//! rational normalisation happens inside the multiplication loops, and a
//! single common denominator is carried alongside.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::gaussian::{numerator_over, GaussInt};
use super::tripoly::TriPoly;

/// Number of monomials `Z^i W^j T^k` with `i + j + k = d`.
pub fn dense_len(d: u32) -> usize {
    let d = d as usize;
    (d + 1) * (d + 2) / 2
}

/// Position of `(i, j)` in the triangular layout of degree `d`.
#[inline]
pub fn tri_index(d: u32, i: u32, j: u32) -> usize {
    let (d, i, j) = (d as usize, i as usize, j as usize);
    i * (d + 1) - i * i.saturating_sub(1) / 2 + j
}

/// Iterate `(i, j)` pairs of degree `d` in layout order.
pub fn tri_pairs(d: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..=d).flat_map(move |i| (0..=d - i).map(move |j| (i, j)))
}

/// Above this many pairwise term products, multiplication goes through
/// Kronecker substitution.
const KRONECKER_THRESHOLD: usize = 4096;

/// `sum c_idx 2^(k idx)` for digits with `|c| < 2^(k-1)`.
fn re_part(c: &GaussInt) -> &BigInt {
    &c.re
}

fn im_part(c: &GaussInt) -> &BigInt {
    &c.im
}

fn pack_signed<'a, I: Iterator<Item = (usize, &'a BigInt)>>(items: I, k: usize) -> BigInt {
    let mut pos: Vec<u64> = Vec::new();
    let mut neg: Vec<u64> = Vec::new();
    for (idx, c) in items {
        if c.is_zero() {
            continue;
        }
        let (sign, digits) = c.to_u64_digits();
        let dst = if sign == Sign::Minus { &mut neg } else { &mut pos };
        write_bits(dst, idx * k, &digits);
    }
    BigInt::from_biguint(Sign::Plus, BigUint::new(to_u32(&pos)))
        - BigInt::from_biguint(Sign::Plus, BigUint::new(to_u32(&neg)))
}

fn to_u32(limbs: &[u64]) -> Vec<u32> {
    limbs
        .iter()
        .flat_map(|&x| [x as u32, (x >> 32) as u32])
        .collect()
}

/// ORs `digits` into `dst` starting at bit `offset`; the target bits are zero.
fn write_bits(dst: &mut Vec<u64>, offset: usize, digits: &[u64]) {
    let (word, shift) = (offset / 64, offset % 64);
    let need = word + digits.len() + 1;
    if dst.len() < need {
        dst.resize(need, 0);
    }
    for (t, &x) in digits.iter().enumerate() {
        dst[word + t] |= x << shift;
        if shift > 0 {
            dst[word + t + 1] |= x >> (64 - shift);
        }
    }
}

/// Bits `[start, start + len)` of a limb array.
fn read_bits(src: &[u64], start: usize, len: usize) -> Vec<u64> {
    let words = len.div_ceil(64);
    let (word, shift) = (start / 64, start % 64);
    let get = |i: usize| src.get(i).copied().unwrap_or(0);
    let mut out: Vec<u64> = (0..words)
        .map(|t| {
            let lo = get(word + t) >> shift;
            let hi = if shift > 0 { get(word + t + 1) << (64 - shift) } else { 0 };
            lo | hi
        })
        .collect();
    let rem = len % 64;
    if rem > 0 {
        if let Some(last) = out.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
    out
}

/// Inverse of [`pack_signed`] for `count` digits.
fn unpack_signed(v: &BigInt, k: usize, count: usize) -> Vec<BigInt> {
    let (sign, limbs) = v.to_u64_digits();
    let half = BigUint::one() << (k - 1);
    let full = BigUint::one() << k;
    let mut carry = false;
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let mut digit = BigUint::new(to_u32(&read_bits(&limbs, idx * k, k)));
        if carry {
            digit += 1u32;
        }
        let c = if digit >= half {
            carry = true;
            BigInt::from_biguint(Sign::Minus, &full - &digit)
        } else {
            carry = false;
            BigInt::from_biguint(Sign::Plus, digit)
        };
        out.push(if sign == Sign::Minus { -c } else { c });
    }
    out
}

#[derive(Clone, Debug)]
pub struct IntPoly {
    pub degree: u32,
    pub coeffs: Vec<GaussInt>,
}

impl IntPoly {
    pub fn zero(degree: u32) -> Self {
        IntPoly {
            degree,
            coeffs: vec![GaussInt::default(); dense_len(degree)],
        }
    }

    /// Integer form of `p`: returns `(P, den)` with `p = P / den`.
    pub fn from_tripoly(p: &TriPoly) -> (IntPoly, BigInt) {
        let mut den = BigInt::one();
        for c in p.terms().values() {
            den = den.lcm(&c.denom_lcm());
        }
        let d = p.degree();
        let mut out = IntPoly::zero(d);
        for (e, c) in p.terms() {
            out.coeffs[tri_index(d, e[0], e[1])] = numerator_over(c, &den);
        }
        (out, den)
    }

    /// `self / den` as an exact `TriPoly`.
    pub fn to_tripoly(&self, den: &BigInt) -> TriPoly {
        let d = self.degree;
        let terms = tri_pairs(d)
            .zip(self.coeffs.iter())
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j), c)| ([i, j, d - i - j], c.over(den)));
        TriPoly::from_terms(d, terms)
    }

    pub fn nonzero_terms(&self) -> Vec<(u32, u32, &GaussInt)> {
        tri_pairs(self.degree)
            .zip(self.coeffs.iter())
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j), c)| (i, j, c))
            .collect()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn mul(&self, rhs: &IntPoly) -> IntPoly {
        let a = self.term_count();
        let b = rhs.term_count();
        if a.saturating_mul(b) > KRONECKER_THRESHOLD {
            self.mul_kronecker(rhs)
        } else {
            self.mul_schoolbook(rhs)
        }
    }

    /// Term-by-term product.
    pub fn mul_schoolbook(&self, rhs: &IntPoly) -> IntPoly {
        let d = self.degree + rhs.degree;
        let mut out = IntPoly::zero(d);
        let a = self.nonzero_terms();
        let b = rhs.nonzero_terms();
        for (ai, aj, ac) in &a {
            for (bi, bj, bc) in &b {
                out.coeffs[tri_index(d, ai + bi, aj + bj)].add_mul(ac, bc);
            }
        }
        out
    }

    /// `self += k * rhs` for polynomials of equal degree.
    pub fn add_scaled(&mut self, k: &GaussInt, rhs: &IntPoly) {
        assert_eq!(self.degree, rhs.degree);
        for (dst, src) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            if !src.is_zero() {
                dst.add_mul(k, src);
            }
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> IntPoly {
        IntPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c.scale(k)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Largest `k` with `T^k` dividing the polynomial (0 for zero).
    pub fn t_valuation(&self) -> u32 {
        let d = self.degree;
        tri_pairs(d)
            .zip(self.coeffs.iter())
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j), _)| d - i - j)
            .min()
            .unwrap_or(0)
    }

    /// Divides by `T^k`; the caller guarantees divisibility.
    pub fn div_t_pow(&self, k: u32) -> IntPoly {
        if k == 0 {
            return self.clone();
        }
        let d = self.degree - k;
        let mut out = IntPoly::zero(d);
        for ((i, j), c) in tri_pairs(self.degree).zip(self.coeffs.iter()) {
            if !c.is_zero() {
                out.coeffs[tri_index(d, i, j)] = c.clone();
            }
        }
        out
    }

    /// Lex-leading exponent `(Z, W)` of a nonzero polynomial.
    pub fn lead_exponent(&self) -> Option<(u32, u32)> {
        tri_pairs(self.degree)
            .zip(self.coeffs.iter())
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, _)| e)
            .max()
    }

    /// `sum k_i * polys_i`, all of one degree.
    pub fn linear_combination(terms: &[(GaussInt, &IntPoly)]) -> IntPoly {
        let d = terms.first().map(|(_, p)| p.degree).unwrap_or(0);
        let mut out = IntPoly::zero(d);
        for (k, p) in terms {
            if !k.is_zero() {
                out.add_scaled(k, p);
            }
        }
        out
    }

    /// Product by Kronecker substitution: both factors are packed into single
    /// big integers, multiplied once per Gaussian component, and unpacked.
    pub fn mul_kronecker(&self, rhs: &IntPoly) -> IntPoly {
        let d = self.degree + rhs.degree;
        let stride = d as usize + 1;
        let max_bits = |p: &IntPoly| {
            p.coeffs
                .iter()
                .map(|c| c.re.bits().max(c.im.bits()))
                .max()
                .unwrap_or(0)
        };
        let n = self.term_count().min(rhs.term_count()).max(1) as u64;
        // |coefficient| of (ar + ai)(br + bi) < 4 n 2^(ba + bb); one more bit for the sign
        let k = (max_bits(self) + max_bits(rhs) + 64 - n.leading_zeros() as u64 + 4) as usize;
        let pack = |p: &IntPoly, part: fn(&GaussInt) -> &BigInt| {
            let items = tri_pairs(p.degree)
                .zip(p.coeffs.iter())
                .map(|((i, j), c)| (i as usize * stride + j as usize, part(c)));
            pack_signed(items, k)
        };
        let (ar, ai) = (pack(self, re_part), pack(self, im_part));
        let (br, bi) = (pack(rhs, re_part), pack(rhs, im_part));
        let rr = &ar * &br;
        let ii = &ai * &bi;
        let cross = &(&ar + &ai) * &(&br + &bi) - &rr - &ii;
        let real = unpack_signed(&(rr - ii), k, stride * stride);
        let imag = unpack_signed(&cross, k, stride * stride);
        let mut out = IntPoly::zero(d);
        for ((i, j), c) in tri_pairs(d).zip(out.coeffs.iter_mut()) {
            let idx = i as usize * stride + j as usize;
            *c = GaussInt::new(real[idx].clone(), imag[idx].clone());
        }
        out
    }

    pub fn one() -> IntPoly {
        IntPoly {
            degree: 0,
            coeffs: vec![GaussInt::new(BigInt::one(), BigInt::zero())],
        }
    }
}

impl PartialEq for IntPoly {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.coeffs == other.coeffs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_poly(rng: &mut ChaCha8Rng, d: u32, bits: u32) -> IntPoly {
        let mut p = IntPoly::zero(d);
        for c in p.coeffs.iter_mut() {
            let big = |rng: &mut ChaCha8Rng| {
                let mut x = BigInt::from(rng.random_range(-1000i64..1000));
                for _ in 0..bits / 32 {
                    x = (x << 32) + BigInt::from(rng.random::<u32>());
                }
                if rng.random_bool(0.5) {
                    -x
                } else {
                    x
                }
            };
            if rng.random_bool(0.8) {
                *c = GaussInt::new(big(rng), big(rng));
            }
        }
        p
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (da, db, bits) in [(0, 3, 0), (4, 7, 40), (9, 5, 200), (12, 12, 70), (3, 1, 1000)] {
            let a = random_poly(&mut rng, da, bits);
            let b = random_poly(&mut rng, db, bits);
            assert_eq!(a.mul_kronecker(&b), a.mul_schoolbook(&b));
        }
        let z = IntPoly::zero(4);
        assert_eq!(z.mul_kronecker(&random_poly(&mut rng, 3, 10)), IntPoly::zero(7));
    }

    #[test]
    fn triangular_layout_is_a_bijection() {
        for d in 0..7 {
            let idx: Vec<usize> = tri_pairs(d).map(|(i, j)| tri_index(d, i, j)).collect();
            assert_eq!(idx, (0..dense_len(d)).collect::<Vec<_>>());
        }
    }
}
