//! Primitive polynomial remainder sequence gcd, computed entirely over the
//! Gaussian rationals.
//!
//! Much slower than the modular route; kept as an independent reference for
//! small inputs.

use num_traits::{One, Zero};

use super::gaussian::GR;
use super::tripoly::TriPoly;
use crate::error::{Error, Result};

type UPol = Vec<GR>;
/// Coefficients in `W`, each a polynomial in `Z`.
type BiPol = Vec<UPol>;

fn utrim(p: &mut UPol) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn umul(a: &[GR], b: &[GR]) -> UPol {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![GR::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    utrim(&mut out);
    out
}

fn usub(a: &[GR], b: &[GR]) -> UPol {
    let mut out = vec![GR::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    utrim(&mut out);
    out
}

fn udivrem(a: &[GR], b: &[GR]) -> (UPol, UPol) {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    utrim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv = b[db].inv();
    let mut q = vec![GR::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] * &inv;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &(&c * bj);
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    utrim(&mut r);
    utrim(&mut q);
    (q, r)
}

fn umonic(p: &[GR]) -> UPol {
    match p.last() {
        Some(lc) => {
            let inv = lc.inv();
            p.iter().map(|c| c * &inv).collect()
        }
        None => Vec::new(),
    }
}

fn ugcd(a: &[GR], b: &[GR]) -> UPol {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    utrim(&mut x);
    utrim(&mut y);
    while !y.is_empty() {
        let (_, r) = udivrem(&x, &y);
        x = std::mem::replace(&mut y, r);
    }
    umonic(&x)
}

fn content(a: &BiPol) -> UPol {
    a.iter()
        .filter(|c| !c.is_empty())
        .fold(Vec::new(), |g, c| ugcd(&g, c))
}

fn primitive(a: &BiPol) -> BiPol {
    let c = content(a);
    a.iter().map(|x| if x.is_empty() { Vec::new() } else { udivrem(x, &c).0 }).collect()
}

fn btrim(a: &mut BiPol) {
    while a.last().is_some_and(|c| c.is_empty()) {
        a.pop();
    }
}

/// Pseudo-remainder of `a` by `b` in `W`, up to a nonzero factor from `Q(i)[Z]`.
fn prem(a: &BiPol, b: &BiPol) -> BiPol {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    btrim(&mut r);
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: BiPol = r.iter().map(|c| umul(c, lb)).collect();
        for (j, bj) in b.iter().enumerate() {
            next[j + shift] = usub(&next[j + shift], &umul(&lr, bj));
        }
        btrim(&mut next);
        r = next;
    }
    r
}

fn to_bi(p: &TriPoly) -> BiPol {
    let d = p.degree() as usize;
    let mut out: BiPol = vec![vec![GR::zero(); d + 1]; d + 1];
    for (e, c) in p.terms() {
        out[e[1] as usize][e[0] as usize] = c.clone();
    }
    for c in out.iter_mut() {
        utrim(c);
    }
    btrim(&mut out);
    out
}

fn from_bi(a: &BiPol) -> TriPoly {
    let degree = a
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_empty())
        .map(|(j, c)| (j + c.len() - 1) as u32)
        .max()
        .unwrap_or(0);
    let terms = a.iter().enumerate().flat_map(|(j, c)| {
        c.iter().enumerate().map(move |(i, v)| {
            ([i as u32, j as u32, degree - (i + j) as u32], v.clone())
        })
    });
    TriPoly::from_terms(degree, terms)
}

/// Gcd by primitive remainder sequences; same normalization as the modular route.
pub fn poly_gcd_prs(a: &TriPoly, b: &TriPoly) -> Result<TriPoly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroGcd);
    }
    if a.is_zero() {
        return Ok(b.normalized());
    }
    if b.is_zero() {
        return Ok(a.normalized());
    }
    let v = a.t_valuation().min(b.t_valuation());
    let (sa, sb) = (a.div_t_pow(a.t_valuation()), b.div_t_pow(b.t_valuation()));
    let (ba, bb) = (to_bi(&sa), to_bi(&sb));
    let c = ugcd(&content(&ba), &content(&bb));
    let mut x = primitive(&ba);
    let mut y = primitive(&bb);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() && y.iter().any(|c| !c.is_empty()) {
        let r = prem(&x, &y);
        x = y;
        y = if r.is_empty() { Vec::new() } else { primitive(&r) };
    }
    let mut g: BiPol = primitive(&x).iter().map(|coef| umul(coef, &c)).collect();
    btrim(&mut g);
    if g.is_empty() {
        g = vec![vec![GR::one()]];
    }
    Ok(from_bi(&g).normalized().mul_t_pow(v))
}
