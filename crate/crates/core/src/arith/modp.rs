//! Prime fields `F_p` with `p = 1 (mod 4)` below `2^62`, in Montgomery form,
//! and dense univariate polynomials over them.
//!
//! Inside a [`Field`] every value is stored as `x * 2^64 mod p`; use
//! [`Field::from_u64`] / [`Field::to_u64`] at the boundary.

/// Montgomery context for one odd prime.
#[derive(Clone, Copy, Debug)]
pub struct Field {
    p: u64,
    /// `-p^{-1} mod 2^64`
    pinv: u64,
    /// `2^128 mod p`
    r2: u64,
    /// `2^64 mod p`, the Montgomery image of 1
    one: u64,
    /// a square root of -1, Montgomery form
    iota: u64,
}

impl Field {
    pub fn new(p: u64) -> Self {
        assert!(p % 4 == 1 && p < (1 << 62));
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        let mut f = Field {
            p,
            pinv: inv.wrapping_neg(),
            r2,
            one: r,
            iota: 0,
        };
        f.iota = f.find_sqrt_neg_one();
        f
    }

    fn find_sqrt_neg_one(&self) -> u64 {
        let e = (self.p - 1) / 4;
        let minus_one = self.neg(self.one);
        for g in 2u64.. {
            let c = self.pow(self.from_u64(g), e);
            if self.mul(c, c) == minus_one {
                return c;
            }
        }
        unreachable!()
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        self.one
    }

    pub fn iota(&self) -> u64 {
        self.iota
    }

    pub fn from_u64(&self, x: u64) -> u64 {
        self.mul(x % self.p, self.r2)
    }

    pub fn to_u64(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = self.one;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero in F_p");
        self.pow(a, self.p - 2)
    }
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes `p = 1 (mod 4)` descending from `2^62`.
pub struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    pub fn new() -> Self {
        // largest value below 2^62 that is 1 mod 4
        PrimeStream {
            next: (1u64 << 62) - 3,
        }
    }
}

impl Default for PrimeStream {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > 5 {
            let c = self.next;
            self.next -= 4;
            if is_prime(c) {
                return Some(c);
            }
        }
        None
    }
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
pub type UPoly = Vec<u64>;

pub fn trim(p: &mut UPoly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree, or `None` for the zero polynomial.
pub fn udeg(p: &[u64]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

pub fn ueval(f: &Field, p: &[u64], x: u64) -> u64 {
    let mut acc = 0;
    for &c in p.iter().rev() {
        acc = f.add(f.mul(acc, x), c);
    }
    acc
}

pub fn uscale(f: &Field, p: &[u64], k: u64) -> UPoly {
    if k == 0 {
        return Vec::new();
    }
    p.iter().map(|&c| f.mul(c, k)).collect()
}

pub fn umonic(f: &Field, p: &[u64]) -> UPoly {
    match p.last() {
        Some(&lc) => uscale(f, p, f.inv(lc)),
        None => Vec::new(),
    }
}

pub fn umul(f: &Field, a: &[u64], b: &[u64]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn udivrem(f: &Field, a: &[u64], b: &[u64]) -> (UPoly, UPoly) {
    let db = udeg(b).expect("division by zero polynomial");
    let mut r: UPoly = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv = f.inv(b[db]);
    let mut q = vec![0; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = f.mul(r[k + db], inv);
        q[k] = c;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b[..=db].iter().enumerate() {
            r[k + j] = f.sub(r[k + j], f.mul(c, bj));
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

/// Monic gcd; the gcd of two zero polynomials is zero.
pub fn ugcd(f: &Field, a: &[u64], b: &[u64]) -> UPoly {
    let mut x: UPoly = a.to_vec();
    let mut y: UPoly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = udivrem(f, &x, &y);
        x = y;
        y = r;
    }
    umonic(f, &x)
}

/// Newton interpolation on a fixed set of nodes; the divided-difference
/// denominators are inverted once and reused for every value vector.
pub struct Interpolator {
    xs: Vec<u64>,
    /// `inv[level][k] = 1 / (xs[k] - xs[k - level])`
    inv: Vec<Vec<u64>>,
}

impl Interpolator {
    /// Nodes must be pairwise distinct.
    pub fn new(f: &Field, xs: &[u64]) -> Self {
        let n = xs.len();
        let mut inv = vec![Vec::new()];
        for level in 1..n {
            let dens: Vec<u64> = (level..n).map(|k| f.sub(xs[k], xs[k - level])).collect();
            inv.push(batch_inverse(f, &dens));
        }
        Interpolator {
            xs: xs.to_vec(),
            inv,
        }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Coefficients of the polynomial of degree `< len` through `(xs[k], ys[k])`.
    pub fn interpolate(&self, f: &Field, ys: &[u64]) -> UPoly {
        let n = self.xs.len();
        assert_eq!(n, ys.len());
        let mut dd: Vec<u64> = ys.to_vec();
        for level in 1..n {
            for k in (level..n).rev() {
                let num = f.sub(dd[k], dd[k - 1]);
                dd[k] = f.mul(num, self.inv[level][k - level]);
            }
        }
        let mut out: UPoly = vec![0; n];
        let mut len = 0;
        for k in (0..n).rev() {
            // out = out * (x - xs[k]) + dd[k]
            let xk = self.xs[k];
            if len > 0 {
                out[len] = out[len - 1];
                for i in (1..len).rev() {
                    out[i] = f.sub(out[i - 1], f.mul(out[i], xk));
                }
                out[0] = f.neg(f.mul(out[0], xk));
            }
            out[0] = f.add(out[0], dd[k]);
            len += 1;
        }
        trim(&mut out);
        out
    }
}

/// Inverts every entry with a single field inversion.
pub fn batch_inverse(f: &Field, xs: &[u64]) -> Vec<u64> {
    let mut prefix = Vec::with_capacity(xs.len());
    let mut acc = f.one();
    for &x in xs {
        prefix.push(acc);
        acc = f.mul(acc, x);
    }
    let mut inv = f.inv(acc);
    let mut out = vec![0; xs.len()];
    for k in (0..xs.len()).rev() {
        out[k] = f.mul(inv, prefix[k]);
        inv = f.mul(inv, xs[k]);
    }
    out
}
