//! Named maps and seeded random maps used throughout tests and reports.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{rat, GR};
use crate::blaschke::{build_map, Blaschke2D, DegreeMatrix};
use crate::error::{Error, Result};

fn r(n: i64, d: i64) -> GR {
    GR::real(rat(n, d))
}

/// Degrees `[[5,2],[2,1]]`; `A` and `C` share the zero `a`:
/// `(θ1 A_a^5 B_b^2, θ2 A_a A_c B_b)`.
pub fn low_top_degree(a: GR, b: GR, c: GR, u1: GR, u2: GR) -> Result<Blaschke2D> {
    build_map(vec![a.clone(); 5], vec![b.clone(); 2], vec![a, c], vec![b], u1, u2)
}

/// [`low_top_degree`] with `a = 1/4`, `b = 1/3`, `c = 1/2` and trivial rotations.
pub fn low_top_degree_default() -> Blaschke2D {
    low_top_degree(r(1, 4), r(1, 3), r(1, 2), GR::one(), GR::one()).expect("valid zeros")
}

/// Degrees `[[3,2],[2,3]]` with topological degree equal to `det N`:
/// `A = {a1, a2, a3}`, `C = {a1, a2}`, `B = {b, b}`, `D = {b, b, b}`.
pub fn equal_degree(a: [GR; 3], b: GR, u1: GR, u2: GR) -> Result<Blaschke2D> {
    let [a1, a2, a3] = a;
    build_map(
        vec![a1.clone(), a2.clone(), a3],
        vec![b.clone(); 2],
        vec![a1, a2],
        vec![b; 3],
        u1,
        u2,
    )
}

/// [`equal_degree`] with `a = (1/4, -1/3, i/5)`, `b = 1/6` and trivial rotations.
pub fn equal_degree_default() -> Blaschke2D {
    equal_degree([r(1, 4), r(-1, 3), GR::from_parts(0, 1, 1, 5)], r(1, 6), GR::one(), GR::one())
        .expect("valid zeros")
}

/// Parameters for [`random_generic_map`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomZeros {
    /// Denominators are drawn from `2..=max_den`.
    pub max_den: i64,
    /// Strict upper bound on the modulus of every zero.
    pub max_modulus: f64,
}

impl Default for RandomZeros {
    fn default() -> Self {
        RandomZeros {
            max_den: 8,
            max_modulus: 1.0,
        }
    }
}

/// A map with pairwise distinct, nonzero Gaussian-rational zeros and random
/// rotations, reproducible from `seed`.
pub fn random_generic_map(n: DegreeMatrix, seed: u64, params: RandomZeros) -> Result<Blaschke2D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [[m, nn], [p, q]] = n.rows();
    let total = (m + nn + p + q) as usize;
    let mut zeros: Vec<GR> = Vec::with_capacity(total);
    let mut attempts = 0usize;
    while zeros.len() < total {
        attempts += 1;
        if attempts > 10_000 * total {
            return Err(Error::InvalidArgument(format!(
                "cannot draw {total} distinct zeros with denominator <= {} and modulus < {}",
                params.max_den, params.max_modulus
            )));
        }
        let den = rng.random_range(2..=params.max_den.max(2));
        let span = ((params.max_modulus * den as f64).ceil() as i64).min(den);
        let re = rng.random_range(-span..=span);
        let im = rng.random_range(-span..=span);
        let z = GR::from_parts(re, den, im, den);
        if z.is_zero() || zeros.contains(&z) || z.to_c64().norm() >= params.max_modulus {
            continue;
        }
        zeros.push(z);
    }
    let mut rot = || loop {
        let u = GR::from_ints(rng.random_range(-4..=4), rng.random_range(-4..=4));
        if !u.is_zero() {
            break u;
        }
    };
    let (u1, u2) = (rot(), rot());
    let mut it = zeros.into_iter();
    let mut take = |k: i64| (&mut it).take(k as usize).collect::<Vec<_>>();
    let (a, b, c, d) = (take(m), take(nn), take(p), take(q));
    build_map(a, b, c, d, u1, u2)
}
