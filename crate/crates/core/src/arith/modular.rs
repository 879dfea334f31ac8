//! Bivariate gcd with cofactors over a prime field (Brown's dense
//! evaluation/interpolation algorithm).
//!
//! A bivariate polynomial is stored as its coefficients in `W`, each of which
//! is a dense [`UPoly`] in `Z`.

use super::modp::{trim, udeg, udivrem, ueval, ugcd, uscale, Field, Interpolator, UPoly};

pub type BiPoly = Vec<UPoly>;

pub fn bi_trim(a: &mut BiPoly) {
    for c in a.iter_mut() {
        trim(c);
    }
    while a.last().is_some_and(|c| c.is_empty()) {
        a.pop();
    }
}

pub fn bi_is_zero(a: &BiPoly) -> bool {
    a.iter().all(|c| c.is_empty())
}

/// Degree in `W`; `None` for zero.
pub fn deg_w(a: &BiPoly) -> Option<usize> {
    a.iter().rposition(|c| !c.is_empty())
}

/// Degree in `Z`; `None` for zero.
pub fn deg_z(a: &BiPoly) -> Option<usize> {
    a.iter().filter_map(|c| udeg(c)).max()
}

/// The univariate polynomial in `W` obtained by setting `Z = z0`.
pub fn eval_z(f: &Field, a: &BiPoly, z0: u64) -> UPoly {
    let mut out: UPoly = a.iter().map(|c| ueval(f, c, z0)).collect();
    trim(&mut out);
    out
}

/// Monic gcd in `F_p[Z]` of the `W`-coefficients.
pub fn content_w(f: &Field, a: &BiPoly) -> UPoly {
    let mut g: UPoly = Vec::new();
    for c in a {
        if c.is_empty() {
            continue;
        }
        g = ugcd(f, &g, c);
        if g.len() == 1 {
            break;
        }
    }
    g
}

/// Divides every coefficient by a polynomial in `Z` that divides all of them.
fn div_z(f: &Field, a: &BiPoly, d: &[u64]) -> BiPoly {
    a.iter()
        .map(|c| {
            if c.is_empty() {
                return Vec::new();
            }
            let (q, r) = udivrem(f, c, d);
            debug_assert!(r.is_empty());
            q
        })
        .collect()
}

fn mul_z(f: &Field, a: &BiPoly, d: &[u64]) -> BiPoly {
    a.iter().map(|c| super::modp::umul(f, c, d)).collect()
}

/// Lex-leading coefficient with `Z` dominant: largest `Z` power, then largest `W` power.
pub fn lex_leading(a: &BiPoly) -> Option<(usize, usize, u64)> {
    let iz = deg_z(a)?;
    let jw = a.iter().rposition(|c| udeg(c) == Some(iz))?;
    Some((iz, jw, a[jw][iz]))
}

/// Result of a successful modular run.
pub struct ModGcd {
    /// The gcd, normalized so that its lex-leading coefficient is 1.
    pub gcd: BiPoly,
    /// `inputs[i] = gcd * cofactors[i]`.
    pub cofactors: Vec<BiPoly>,
}

/// Gcd and cofactors of nonzero bivariate polynomials over `F_p`.
///
/// Returns `None` when the evaluation sequence was unlucky in a way the
/// algorithm cannot repair locally; the caller then moves to the next prime.
pub fn gcd_cofactors_modp(f: &Field, inputs: &[BiPoly]) -> Option<ModGcd> {
    assert!(!inputs.is_empty());
    let conts: Vec<UPoly> = inputs.iter().map(|a| content_w(f, a)).collect();
    let prims: Vec<BiPoly> = inputs
        .iter()
        .zip(&conts)
        .map(|(a, c)| div_z(f, a, c))
        .collect();
    let mut cont_gcd: UPoly = Vec::new();
    for c in &conts {
        cont_gcd = ugcd(f, &cont_gcd, c);
    }

    let g_prim = primitive_gcd(f, &prims)?;

    // cofactors of the primitive parts, by evaluation and exact division
    let dz_max = prims.iter().filter_map(deg_z).max().unwrap_or(0);
    let lc_g = g_prim.last().cloned().unwrap_or_default();
    let mut xs = Vec::with_capacity(dz_max + 1);
    let mut images: Vec<Vec<UPoly>> = vec![Vec::with_capacity(dz_max + 1); prims.len()];
    let mut z = 0u64;
    while xs.len() <= dz_max {
        z += 1;
        let z0 = f.from_u64(z);
        if ueval(f, &lc_g, z0) == 0 {
            continue;
        }
        let gz = eval_z(f, &g_prim, z0);
        for (img, a) in images.iter_mut().zip(&prims) {
            let (q, r) = udivrem(f, &eval_z(f, a, z0), &gz);
            if !r.is_empty() {
                return None;
            }
            img.push(q);
        }
        xs.push(z0);
    }
    let interp = Interpolator::new(f, &xs);
    let gdz = deg_z(&g_prim).unwrap_or(0);
    let mut cofactors = Vec::with_capacity(prims.len());
    for ((img, a), c) in images.iter().zip(&prims).zip(&conts) {
        let q = interpolate_bi(f, &interp, img);
        // degree test: q * g agrees with a at more points than its Z-degree
        let qdz = deg_z(&q).unwrap_or(0);
        if qdz + gdz > deg_z(a).unwrap_or(0) {
            return None;
        }
        let (extra, r) = udivrem(f, c, &cont_gcd);
        debug_assert!(r.is_empty());
        cofactors.push(mul_z(f, &q, &extra));
    }

    let mut gcd = mul_z(f, &g_prim, &cont_gcd);
    bi_trim(&mut gcd);
    let (_, _, lc) = lex_leading(&gcd)?;
    let inv = f.inv(lc);
    for c in gcd.iter_mut() {
        *c = uscale(f, c, inv);
    }
    for q in cofactors.iter_mut() {
        for c in q.iter_mut() {
            *c = uscale(f, c, lc);
        }
        bi_trim(q);
    }
    Some(ModGcd { gcd, cofactors })
}

/// Gcd of primitive polynomials, itself primitive (content-free in `Z`).
fn primitive_gcd(f: &Field, prims: &[BiPoly]) -> Option<BiPoly> {
    let lcs: Vec<&UPoly> = prims.iter().map(|a| a.last().expect("nonzero input")).collect();
    let mut gamma: UPoly = Vec::new();
    for lc in &lcs {
        gamma = ugcd(f, &gamma, lc);
    }
    let min_dz = prims.iter().filter_map(deg_z).min().unwrap_or(0);
    let needed = udeg(&gamma).unwrap_or(0) + min_dz + 1;

    let mut best_deg = usize::MAX;
    let mut xs: Vec<u64> = Vec::new();
    let mut ys: Vec<UPoly> = Vec::new();
    let mut z = 0u64;
    let mut attempts = 0usize;
    while xs.len() < needed {
        z += 1;
        attempts += 1;
        if attempts > 4 * needed + 64 {
            return None;
        }
        let z0 = f.from_u64(z);
        if lcs.iter().any(|lc| ueval(f, lc, z0) == 0) {
            continue;
        }
        let mut g0: UPoly = Vec::new();
        for a in prims {
            g0 = ugcd(f, &g0, &eval_z(f, a, z0));
            if g0.len() == 1 {
                break;
            }
        }
        let d = udeg(&g0).unwrap_or(0);
        if d == 0 {
            // a good point with a constant image certifies a trivial gcd
            return Some(vec![vec![f.one()]]);
        }
        if d > best_deg {
            continue;
        }
        if d < best_deg {
            best_deg = d;
            xs.clear();
            ys.clear();
        }
        xs.push(z0);
        ys.push(uscale(f, &g0, ueval(f, &gamma, z0)));
    }
    let interp = Interpolator::new(f, &xs);
    let h = interpolate_bi(f, &interp, &ys);
    let c = content_w(f, &h);
    let mut g = div_z(f, &h, &c);
    bi_trim(&mut g);
    Some(g)
}

/// Interpolates each `W`-coefficient across the images.
fn interpolate_bi(f: &Field, interp: &Interpolator, images: &[UPoly]) -> BiPoly {
    let dw = images.iter().map(|p| p.len()).max().unwrap_or(0);
    let mut out: BiPoly = Vec::with_capacity(dw);
    let mut ys = vec![0u64; images.len()];
    for j in 0..dw {
        for (y, img) in ys.iter_mut().zip(images) {
            *y = img.get(j).copied().unwrap_or(0);
        }
        out.push(interp.interpolate(f, &ys));
    }
    bi_trim(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::super::modp::{umul, PrimeStream};
    use super::*;

    fn bi_mul(f: &Field, a: &BiPoly, b: &BiPoly) -> BiPoly {
        let mut out: BiPoly = vec![Vec::new(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let prod = umul(f, x, y);
                let acc = &mut out[i + j];
                if acc.len() < prod.len() {
                    acc.resize(prod.len(), 0);
                }
                for (k, v) in prod.into_iter().enumerate() {
                    acc[k] = f.add(acc[k], v);
                }
            }
        }
        bi_trim(&mut out);
        out
    }

    fn lift(f: &Field, raw: &[&[u64]]) -> BiPoly {
        let mut p: BiPoly = raw
            .iter()
            .map(|c| c.iter().map(|&x| f.from_u64(x)).collect())
            .collect();
        bi_trim(&mut p);
        p
    }

    #[test]
    fn recovers_planted_common_factor() {
        let f = Field::new(PrimeStream::new().next().unwrap());
        // g = W + Z + 1, r1 = W^2 + 3Z, r2 = Z W + 5, shared content (Z + 2)
        let g = lift(&f, &[&[1, 1], &[1]]);
        let r1 = lift(&f, &[&[0, 3], &[], &[1]]);
        let r2 = lift(&f, &[&[5], &[0, 1]]);
        let cz = lift(&f, &[&[2, 1]]);
        let a = bi_mul(&f, &bi_mul(&f, &g, &r1), &cz);
        let b = bi_mul(&f, &bi_mul(&f, &g, &r2), &cz);
        let res = gcd_cofactors_modp(&f, &[a.clone(), b.clone()]).unwrap();
        let expect = bi_mul(&f, &g, &cz);
        // lex-leading term of (W+Z+1)(Z+2) is Z^2 with coefficient 1
        assert_eq!(res.gcd, expect);
        assert_eq!(bi_mul(&f, &res.gcd, &res.cofactors[0]), a);
        assert_eq!(bi_mul(&f, &res.gcd, &res.cofactors[1]), b);
    }

    #[test]
    fn coprime_inputs() {
        let f = Field::new(PrimeStream::new().next().unwrap());
        let a = lift(&f, &[&[0, 1], &[1]]);
        let b = lift(&f, &[&[3], &[0, 0, 1]]);
        let res = gcd_cofactors_modp(&f, &[a.clone(), b]).unwrap();
        assert_eq!(res.gcd, vec![vec![f.one()]]);
        assert_eq!(res.cofactors[0], a);
    }
}
