use num_complex::Complex64;
use num_traits::{One, Zero};

use super::map::{Blaschke2D, Factor};
use crate::arith::intpoly::dense_len;
use crate::arith::{gcd_cofactors, poly_mul, TermBudget, TriPoly, GR};
use crate::error::Result;

/// `[F1 : F2 : F3]`, three homogeneous polynomials of one common degree.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousMap {
    pub f: [TriPoly; 3],
}

impl HomogeneousMap {
    /// Panics unless the three degrees agree.
    pub fn new(f: [TriPoly; 3]) -> Self {
        let d = f[0].degree();
        assert!(f.iter().all(|p| p.degree() == d), "components of different degree");
        HomogeneousMap { f }
    }

    /// `[Z : W : T]`
    pub fn identity() -> Self {
        HomogeneousMap::new([TriPoly::var_z(), TriPoly::var_w(), TriPoly::var_t()])
    }

    pub fn degree(&self) -> u32 {
        self.f[0].degree()
    }

    pub fn term_count(&self) -> usize {
        self.f.iter().map(|p| p.len()).sum()
    }

    pub fn eval(&self, pt: &[GR; 3]) -> [GR; 3] {
        [self.f[0].eval(pt), self.f[1].eval(pt), self.f[2].eval(pt)]
    }

    pub fn eval_c64(&self, pt: [Complex64; 3]) -> [Complex64; 3] {
        [
            self.f[0].eval_c64(pt),
            self.f[1].eval_c64(pt),
            self.f[2].eval_c64(pt),
        ]
    }

    /// Divides out the gcd of the three components.
    pub fn reduced(&self) -> Result<HomogeneousMap> {
        let res = gcd_cofactors(&self.f)?;
        let [a, b, c]: [TriPoly; 3] = res.cofactors.try_into().expect("three cofactors");
        Ok(HomogeneousMap::new([a, b, c]))
    }

    /// True if the three components have no common factor.
    pub fn is_reduced(&self) -> Result<bool> {
        Ok(gcd_cofactors(&self.f)?.gcd.degree() == 0)
    }
}

/// Linear form `cz Z + cw W + ct T`, normalized so that the first nonzero of
/// `(cz, cw, ct)` is 1 (the same convention as [`TriPoly::normalized`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm(pub [GR; 3]);

impl LinearForm {
    /// Returns the normalized form and the factor `k` with `raw = k * form`.
    pub fn normalize(raw: [GR; 3]) -> (LinearForm, GR) {
        let k = raw
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .expect("nonzero linear form");
        let inv = k.inv();
        let form = [&raw[0] * &inv, &raw[1] * &inv, &raw[2] * &inv];
        (LinearForm(form), k)
    }

    pub fn to_tripoly(&self) -> TriPoly {
        TriPoly::linear(self.0[0].clone(), self.0[1].clone(), self.0[2].clone())
    }

    pub fn eval(&self, pt: &[GR; 3]) -> GR {
        &(&(&self.0[0] * &pt[0]) + &(&self.0[1] * &pt[1])) + &(&self.0[2] * &pt[2])
    }

    pub fn to_c64(&self) -> [Complex64; 3] {
        [self.0[0].to_c64(), self.0[1].to_c64(), self.0[2].to_c64()]
    }
}

/// Each component stored as `scalar * prod(forms)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredMap {
    pub scalars: [GR; 3],
    pub forms: [Vec<LinearForm>; 3],
}

impl FactoredMap {
    pub fn degree(&self) -> u32 {
        self.forms[0].len() as u32
    }

    /// Expands the products.
    pub fn expand(&self) -> HomogeneousMap {
        let comp = |k: usize| {
            self.forms[k]
                .iter()
                .fold(TriPoly::constant(self.scalars[k].clone()), |acc, l| {
                    poly_mul(&acc, &l.to_tripoly())
                })
        };
        HomogeneousMap::new([comp(0), comp(1), comp(2)])
    }

    /// Removes linear forms common to all three components (with multiplicity).
    /// Returns the reduced map and the removed forms, in sorted order.
    pub fn reduce(&self) -> (FactoredMap, Vec<LinearForm>) {
        let mut sorted: [Vec<LinearForm>; 3] = self.forms.clone();
        for s in sorted.iter_mut() {
            s.sort();
        }
        let mut common = Vec::new();
        let mut rest: [Vec<LinearForm>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        let mut idx = [0usize; 3];
        loop {
            let heads: Vec<Option<&LinearForm>> = (0..3).map(|k| sorted[k].get(idx[k])).collect();
            if heads.iter().all(|h| h.is_none()) {
                break;
            }
            if let (Some(a), Some(b), Some(c)) = (heads[0], heads[1], heads[2]) {
                if a == b && b == c {
                    common.push(a.clone());
                    idx = [idx[0] + 1, idx[1] + 1, idx[2] + 1];
                    continue;
                }
            }
            // advance the smallest head
            let (k, _) = heads
                .iter()
                .enumerate()
                .filter_map(|(k, h)| h.map(|h| (k, h)))
                .min_by(|x, y| x.1.cmp(y.1))
                .expect("some head remains");
            rest[k].push(sorted[k][idx[k]].clone());
            idx[k] += 1;
        }
        (
            FactoredMap {
                scalars: self.scalars.clone(),
                forms: rest,
            },
            common,
        )
    }

    pub fn eval_c64(&self, pt: [Complex64; 3]) -> [Complex64; 3] {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for k in 0..3 {
            let mut acc = self.scalars[k].to_c64();
            for l in &self.forms[k] {
                let c = l.to_c64();
                acc *= c[0] * pt[0] + c[1] * pt[1] + c[2] * pt[2];
            }
            out[k] = acc;
        }
        out
    }
}

/// Lift before any cancellation: degree `m + n + p + q`.
pub fn raw_factored_lift(f: &Blaschke2D) -> FactoredMap {
    let zero = GR::zero;
    let one = GR::one;
    // Z - aT, W - bT
    let zero_line_z = |a: &GR| [one(), zero(), -a];
    let zero_line_w = |b: &GR| [zero(), one(), -b];
    // T - conj(a) Z, T - conj(b) W
    let pole_line_z = |a: &GR| [-a.conj(), zero(), one()];
    let pole_line_w = |b: &GR| [zero(), -b.conj(), one()];

    let (a, b, c, d) = (
        f.zeros(Factor::A),
        f.zeros(Factor::B),
        f.zeros(Factor::C),
        f.zeros(Factor::D),
    );
    let poles: Vec<[GR; 3]> = a
        .iter()
        .map(pole_line_z)
        .chain(b.iter().map(pole_line_w))
        .chain(c.iter().map(pole_line_z))
        .chain(d.iter().map(pole_line_w))
        .collect();
    let f1: Vec<[GR; 3]> = a
        .iter()
        .map(zero_line_z)
        .chain(b.iter().map(zero_line_w))
        .chain(c.iter().map(pole_line_z))
        .chain(d.iter().map(pole_line_w))
        .collect();
    let f2: Vec<[GR; 3]> = c
        .iter()
        .map(zero_line_z)
        .chain(d.iter().map(zero_line_w))
        .chain(a.iter().map(pole_line_z))
        .chain(b.iter().map(pole_line_w))
        .collect();

    let mut scalars = [f.theta(0).clone(), f.theta(1).clone(), GR::one()];
    let mut forms: [Vec<LinearForm>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (k, raw) in [f1, f2, poles].into_iter().enumerate() {
        for r in raw {
            let (form, scale) = LinearForm::normalize(r);
            scalars[k] *= &scale;
            forms[k].push(form);
        }
    }
    FactoredMap { scalars, forms }
}

/// Reduced lift in factored form together with the cancelled common factor.
pub fn factored_lift(f: &Blaschke2D) -> (FactoredMap, Vec<LinearForm>) {
    raw_factored_lift(f).reduce()
}

/// The homogeneous lift as an explicit product, before cancellation.
pub fn raw_lift(f: &Blaschke2D) -> HomogeneousMap {
    raw_factored_lift(f).expand()
}

/// Reduced homogeneous lift; its degree is the algebraic degree of `f`.
pub fn lift(f: &Blaschke2D) -> Result<HomogeneousMap> {
    lift_budgeted(f, &TermBudget::UNLIMITED)
}

pub fn lift_budgeted(f: &Blaschke2D, budget: &TermBudget) -> Result<HomogeneousMap> {
    budget.check(3 * dense_len(f.degree_matrix().total()))?;
    raw_lift(f).reduced()
}
