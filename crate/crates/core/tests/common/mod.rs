#![allow(dead_code)]

use blaschke::arith::{Exp, TriPoly, GR};
use blaschke::blaschke::DegreeMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn nm(m: u32, n: u32, p: u32, q: u32) -> DegreeMatrix {
    DegreeMatrix::new(m, n, p, q).unwrap()
}

/// Gaussian rational with denominator `den` inside the unit disc.
pub fn disc_point(rng: &mut ChaCha8Rng, den: i64) -> GR {
    loop {
        let z = GR::from_parts(rng.random_range(-den..=den), den, rng.random_range(-den..=den), den);
        if z.to_c64().norm() < 0.999 {
            return z;
        }
    }
}

pub fn small_gr(rng: &mut ChaCha8Rng) -> GR {
    GR::from_parts(
        rng.random_range(-9..=9),
        rng.random_range(1..=6),
        rng.random_range(-9..=9),
        rng.random_range(1..=6),
    )
}

/// Homogeneous of the given degree with a few random terms; never zero.
pub fn random_tripoly(rng: &mut ChaCha8Rng, degree: u32) -> TriPoly {
    loop {
        let mut terms: Vec<(Exp, GR)> = Vec::new();
        for i in 0..=degree {
            for j in 0..=degree - i {
                if rng.random_bool(0.6) {
                    terms.push(([i, j, degree - i - j], small_gr(rng)));
                }
            }
        }
        let p = TriPoly::from_terms(degree, terms);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_tripoly_in(rng: &mut ChaCha8Rng, lo: u32, hi: u32) -> TriPoly {
    let d = rng.random_range(lo..=hi);
    random_tripoly(rng, d)
}
