use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{Rational, UniPoly, GR};
use crate::error::{Error, Result};

/// The matrix `[[m, n], [p, q]]` of factor counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DegreeMatrix {
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub q: u32,
}

impl DegreeMatrix {
    /// Validates `m, n, p, q >= 1` and `mq - np > 0`.
    pub fn new(m: u32, n: u32, p: u32, q: u32) -> Result<Self> {
        for (count, factor) in [(m, 'A'), (n, 'B'), (p, 'C'), (q, 'D')] {
            if count == 0 {
                return Err(Error::EmptyFactor { factor });
            }
        }
        let nm = DegreeMatrix { m, n, p, q };
        if nm.det() <= 0 {
            return Err(Error::DegenerateDeterminant { det: nm.det() });
        }
        Ok(nm)
    }

    pub fn from_rows(rows: [[u32; 2]; 2]) -> Result<Self> {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn det(&self) -> i64 {
        self.m as i64 * self.q as i64 - self.n as i64 * self.p as i64
    }

    pub fn trace(&self) -> i64 {
        self.m as i64 + self.q as i64
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [
            [self.m as i64, self.n as i64],
            [self.p as i64, self.q as i64],
        ]
    }

    /// `N^k` with exact integer entries.
    pub fn pow(&self, k: u32) -> [[i128; 2]; 2] {
        let n = self.rows();
        let base = [
            [n[0][0] as i128, n[0][1] as i128],
            [n[1][0] as i128, n[1][1] as i128],
        ];
        let mut acc = [[1i128, 0], [0, 1]];
        for _ in 0..k {
            acc = mat2_mul(&acc, &base);
        }
        acc
    }

    /// Number of preimages of a generic point for zeros in general position.
    pub fn generic_top_degree(&self) -> i64 {
        self.m as i64 * self.q as i64 + self.n as i64 * self.p as i64
    }

    pub fn total(&self) -> u32 {
        self.m + self.n + self.p + self.q
    }
}

impl fmt::Display for DegreeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.m, self.n, self.p, self.q)
    }
}

pub fn mat2_mul(a: &[[i128; 2]; 2], b: &[[i128; 2]; 2]) -> [[i128; 2]; 2] {
    let mut out = [[0i128; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `theta = u / conj(u)`; always exactly unimodular.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularRotation {
    seed: GR,
    value: GR,
}

impl UnimodularRotation {
    pub fn new(seed: GR) -> Result<Self> {
        if seed.is_zero() {
            return Err(Error::ZeroRotationSeed);
        }
        let value = &seed / &seed.conj();
        Ok(UnimodularRotation { seed, value })
    }

    pub fn identity() -> Self {
        UnimodularRotation {
            seed: GR::one(),
            value: GR::one(),
        }
    }

    pub fn seed(&self) -> &GR {
        &self.seed
    }

    pub fn value(&self) -> &GR {
        &self.value
    }
}

/// `theta * prod (x - a) / (1 - conj(a) x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneVarBlaschke {
    pub zeros: Vec<GR>,
    pub rotation: UnimodularRotation,
}

impl OneVarBlaschke {
    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Numerator `theta * prod (x - a)`.
    pub fn numerator(&self) -> UniPoly {
        UniPoly::from_roots(&self.zeros).scale(self.rotation.value())
    }

    /// Denominator `prod (1 - conj(a) x)`.
    pub fn denominator(&self) -> UniPoly {
        UniPoly::from_poles(&self.zeros)
    }

    /// Exact value; `None` at a pole.
    pub fn eval(&self, x: &GR) -> Option<GR> {
        let mut num = self.rotation.value().clone();
        let mut den = GR::one();
        for a in &self.zeros {
            num *= &(x - a);
            den *= &(&GR::one() - &(&a.conj() * x));
        }
        if den.is_zero() {
            None
        } else {
            Some(&num / &den)
        }
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        let mut acc = self.rotation.value().to_c64();
        for a in &self.zeros {
            let a = a.to_c64();
            acc *= (x - a) / (1.0 - a.conj() * x);
        }
        acc
    }

    /// Exact derivative; `None` at a pole.
    pub fn derivative_at(&self, x: &GR) -> Option<GR> {
        let (p, q) = (self.numerator(), self.denominator());
        let qx = q.eval(x);
        if qx.is_zero() {
            return None;
        }
        let num = &(&p.derivative().eval(x) * &qx) - &(&p.eval(x) * &q.derivative().eval(x));
        Some(&num / &(&qx * &qx))
    }
}

/// Which of the four one-variable factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Factor {
    A,
    B,
    C,
    D,
}

impl Factor {
    pub const ALL: [Factor; 4] = [Factor::A, Factor::B, Factor::C, Factor::D];

    pub fn label(self) -> char {
        match self {
            Factor::A => 'A',
            Factor::B => 'B',
            Factor::C => 'C',
            Factor::D => 'D',
        }
    }

    /// `A` and `C` are functions of `z`; `B` and `D` of `w`.
    pub fn in_z(self) -> bool {
        matches!(self, Factor::A | Factor::C)
    }

    /// Output coordinate the factor contributes to (0 or 1).
    pub fn coordinate(self) -> usize {
        match self {
            Factor::A | Factor::B => 0,
            Factor::C | Factor::D => 1,
        }
    }
}

/// `f(z, w) = (theta1 A(z) B(w), theta2 C(z) D(w))` with zeros in the open unit disc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blaschke2D {
    zeros: [Vec<GR>; 4],
    theta1: UnimodularRotation,
    theta2: UnimodularRotation,
    n: DegreeMatrix,
}

impl Blaschke2D {
    pub fn degree_matrix(&self) -> DegreeMatrix {
        self.n
    }

    pub fn zeros(&self, factor: Factor) -> &[GR] {
        &self.zeros[factor as usize]
    }

    pub fn theta1(&self) -> &UnimodularRotation {
        &self.theta1
    }

    pub fn theta2(&self) -> &UnimodularRotation {
        &self.theta2
    }

    /// `theta1` for the first coordinate, `theta2` for the second.
    pub fn theta(&self, coordinate: usize) -> &GR {
        if coordinate == 0 {
            self.theta1.value()
        } else {
            self.theta2.value()
        }
    }

    /// The one-variable factor; the rotation of each coordinate is attached to `A` and `C`.
    pub fn factor(&self, factor: Factor) -> OneVarBlaschke {
        let rotation = match factor {
            Factor::A => self.theta1.clone(),
            Factor::C => self.theta2.clone(),
            _ => UnimodularRotation::identity(),
        };
        OneVarBlaschke {
            zeros: self.zeros(factor).to_vec(),
            rotation,
        }
    }

    /// All zeros in the order `A, B, C, D`.
    pub fn sigma(&self) -> Vec<GR> {
        self.zeros.iter().flatten().cloned().collect()
    }

    pub fn is_monomial(&self) -> bool {
        self.zeros.iter().flatten().all(|z| z.is_zero())
            && self.theta1.value().is_one()
            && self.theta2.value().is_one()
    }

    /// Same zeros, new rotation seeds.
    pub fn with_rotations(&self, u1: GR, u2: GR) -> Result<Blaschke2D> {
        let mut out = self.clone();
        out.theta1 = UnimodularRotation::new(u1)?;
        out.theta2 = UnimodularRotation::new(u2)?;
        Ok(out)
    }

    /// Exact value away from poles.
    pub fn eval_exact(&self, z: &GR, w: &GR) -> Option<(GR, GR)> {
        let x = &self.factor(Factor::A).eval(z)? * &self.factor(Factor::B).eval(w)?;
        let y = &self.factor(Factor::C).eval(z)? * &self.factor(Factor::D).eval(w)?;
        Some((x, y))
    }

    /// Direct product formula in double precision (no indeterminacy handling).
    pub fn eval_direct(&self, z: Complex64, w: Complex64) -> (Complex64, Complex64) {
        (
            self.factor(Factor::A).eval_c64(z) * self.factor(Factor::B).eval_c64(w),
            self.factor(Factor::C).eval_c64(z) * self.factor(Factor::D).eval_c64(w),
        )
    }

    /// The same map with every coefficient conjugated: `z -> conj(f(conj z))`.
    pub fn conjugate(&self) -> Blaschke2D {
        let conj = |v: &Vec<GR>| v.iter().map(|x| x.conj()).collect::<Vec<_>>();
        Blaschke2D {
            zeros: [
                conj(&self.zeros[0]),
                conj(&self.zeros[1]),
                conj(&self.zeros[2]),
                conj(&self.zeros[3]),
            ],
            theta1: UnimodularRotation::new(self.theta1.seed().conj()).expect("nonzero seed"),
            theta2: UnimodularRotation::new(self.theta2.seed().conj()).expect("nonzero seed"),
            n: self.n,
        }
    }
}

/// Validates zeros and rotation seeds and derives `N`.
pub fn build_map(a: Vec<GR>, b: Vec<GR>, c: Vec<GR>, d: Vec<GR>, u1: GR, u2: GR) -> Result<Blaschke2D> {
    let zeros = [a, b, c, d];
    for (list, factor) in zeros.iter().zip(Factor::ALL) {
        if list.is_empty() {
            return Err(Error::EmptyFactor {
                factor: factor.label(),
            });
        }
        for z in list {
            if z.norm_sqr() >= Rational::one() {
                return Err(Error::ZeroOutsideDisc {
                    factor: factor.label(),
                    value: z.to_string(),
                });
            }
        }
    }
    let theta1 = UnimodularRotation::new(u1)?;
    let theta2 = UnimodularRotation::new(u2)?;
    let n = DegreeMatrix::new(
        zeros[0].len() as u32,
        zeros[1].len() as u32,
        zeros[2].len() as u32,
        zeros[3].len() as u32,
    )?;
    Ok(Blaschke2D {
        zeros,
        theta1,
        theta2,
        n,
    })
}

/// `(z^m w^n, z^p w^q)`.
pub fn monomial_map(n: DegreeMatrix) -> Blaschke2D {
    let zeros = |k: u32| vec![GR::zero(); k as usize];
    build_map(zeros(n.m), zeros(n.n), zeros(n.p), zeros(n.q), GR::one(), GR::one())
        .expect("a valid degree matrix gives a valid monomial map")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn r(n: i64, d: i64) -> GR {
        GR::real(rat(n, d))
    }

    #[test]
    fn construction_and_validation() {
        let f = build_map(
            vec![r(1, 2)],
            vec![r(1, 3)],
            vec![r(1, 5)],
            vec![GR::from_parts(0, 1, 1, 4), r(1, 7)],
            GR::one(),
            GR::one(),
        )
        .unwrap();
        assert_eq!(f.degree_matrix(), DegreeMatrix::new(1, 1, 1, 2).unwrap());
        assert_eq!(f.degree_matrix().det(), 1);

        let err = build_map(vec![r(1, 2)], vec![r(1, 3)], vec![r(1, 5)], vec![r(1, 4)], GR::one(), GR::one());
        assert_eq!(err.unwrap_err(), Error::DegenerateDeterminant { det: 0 });

        let err = build_map(vec![r(3, 2)], vec![r(1, 3)], vec![r(1, 5)], vec![r(1, 4), r(1, 7)], GR::one(), GR::one());
        assert!(matches!(err, Err(Error::ZeroOutsideDisc { factor: 'A', .. })));

        let err = build_map(vec![], vec![r(1, 3)], vec![r(1, 5)], vec![r(1, 4)], GR::one(), GR::one());
        assert_eq!(err.unwrap_err(), Error::EmptyFactor { factor: 'A' });

        // boundary: |z| = 1 exactly is rejected
        let err = build_map(vec![GR::from_parts(3, 5, 4, 5)], vec![r(1, 3)], vec![r(1, 5)], vec![r(1, 4), r(0, 1)], GR::one(), GR::one());
        assert!(matches!(err, Err(Error::ZeroOutsideDisc { .. })));
    }

    #[test]
    fn monomial_values() {
        let f = monomial_map(DegreeMatrix::new(1, 1, 1, 2).unwrap());
        assert!(f.is_monomial());
        let (x, y) = f.eval_exact(&GR::from(2), &GR::from(3)).unwrap();
        assert_eq!((x, y), (GR::from(6), GR::from(18)));
        let g = monomial_map(DegreeMatrix::new(2, 1, 1, 1).unwrap());
        let (x, y) = g.eval_exact(&GR::from(2), &GR::from(3)).unwrap();
        assert_eq!((x, y), (GR::from(12), GR::from(6)));
    }

    #[test]
    fn rotations_are_unimodular() {
        let t = UnimodularRotation::new(GR::from_parts(2, 3, -5, 7)).unwrap();
        assert!((t.value() * &t.value().conj()).is_one());
        assert_eq!(UnimodularRotation::new(GR::zero()).unwrap_err(), Error::ZeroRotationSeed);
    }

    #[test]
    fn degree_matrix_powers() {
        let n = DegreeMatrix::new(1, 1, 1, 2).unwrap();
        assert_eq!(n.pow(2), [[2, 3], [3, 5]]);
        assert_eq!(n.pow(0), [[1, 0], [0, 1]]);
    }
}
