//! Lines of zeros and poles, indeterminacy, critical locus, and the behaviour
//! of the map near the two blown-up points at infinity.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{TriPoly, UniPoly, GR};
use crate::blaschke::{factored_lift, Blaschke2D, Factor, LinearForm};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LineKind {
    Zero(Factor),
    Pole(Factor),
    Infinity,
}

impl fmt::Display for LineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineKind::Zero(k) => write!(f, "zero-of-{}", k.label()),
            LineKind::Pole(k) => write!(f, "pole-of-{}", k.label()),
            LineKind::Infinity => write!(f, "line-at-infinity"),
        }
    }
}

/// A line of `P^2` with its origin in the map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjLine {
    pub kind: LineKind,
    /// Position of the zero within its factor; 0 for the line at infinity.
    pub index: usize,
    /// Coefficients of `Z, W, T` as written: `Z - aT`, `T - conj(a) Z`, `T`.
    pub form: [GR; 3],
    /// The zero is 0, so the line is a coordinate axis or the line at infinity.
    pub degenerate: bool,
}

impl ProjLine {
    pub fn polynomial(&self) -> TriPoly {
        TriPoly::linear(self.form[0].clone(), self.form[1].clone(), self.form[2].clone())
    }

    /// Canonical representative, for set comparisons.
    pub fn normalized(&self) -> LinearForm {
        LinearForm::normalize(self.form.clone()).0
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.polynomial())
    }
}

fn zero_line(k: Factor, a: &GR) -> [GR; 3] {
    if k.in_z() {
        [GR::one(), GR::zero(), -a]
    } else {
        [GR::zero(), GR::one(), -a]
    }
}

fn pole_line(k: Factor, a: &GR) -> [GR; 3] {
    if k.in_z() {
        [-a.conj(), GR::zero(), GR::one()]
    } else {
        [GR::zero(), -a.conj(), GR::one()]
    }
}

/// Every zero line and pole line of the four factors, then the line at infinity.
pub fn line_arrangement(f: &Blaschke2D) -> Vec<ProjLine> {
    let mut out = Vec::new();
    for k in Factor::ALL {
        for (i, a) in f.zeros(k).iter().enumerate() {
            out.push(ProjLine {
                kind: LineKind::Zero(k),
                index: i,
                form: zero_line(k, a),
                degenerate: a.is_zero(),
            });
            out.push(ProjLine {
                kind: LineKind::Pole(k),
                index: i,
                form: pole_line(k, a),
                degenerate: a.is_zero(),
            });
        }
    }
    out.push(ProjLine {
        kind: LineKind::Infinity,
        index: 0,
        form: [GR::zero(), GR::zero(), GR::one()],
        degenerate: false,
    });
    out
}

/// Indeterminacy points of the map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndetSet {
    /// Sorted, without repetition.
    pub finite: Vec<(GR, GR)>,
    /// `[1:0:0]` and `[0:1:0]`, when they are indeterminate.
    pub infinite: Vec<[GR; 3]>,
    pub warnings: Vec<String>,
}

impl IndetSet {
    pub fn finite_set(&self) -> BTreeSet<(GR, GR)> {
        self.finite.iter().cloned().collect()
    }

    /// Fails if the enumeration had to skip or merge points.
    pub fn strict(self) -> Result<IndetSet> {
        if self.warnings.is_empty() {
            Ok(self)
        } else {
            Err(Error::DegenerateConfiguration(self.warnings.join("; ")))
        }
    }
}

/// `2(mn + pq) + (mq + np)` for distinct nonzero zeros.
pub fn expected_indeterminacy_count(f: &Blaschke2D) -> i64 {
    let [[m, n], [p, q]] = f.degree_matrix().rows();
    2 * (m * n + p * q) + (m * q + n * p)
}

/// Pairwise intersections of zero and pole lines at which all three lift
/// components vanish, each checked by exact evaluation.
pub fn indeterminacy_points(f: &Blaschke2D) -> IndetSet {
    let (fm, _) = factored_lift(f);
    let vanishes = |pt: &[GR; 3]| {
        (0..3).all(|k| {
            fm.scalars[k].is_zero() || fm.forms[k].iter().any(|l| l.eval(pt).is_zero())
        })
    };
    let mut warnings = Vec::new();
    let inv_conj = |x: &GR, label: char, warnings: &mut Vec<String>| {
        if x.is_zero() {
            warnings.push(format!("zero of {label} at the origin has its pole line at infinity"));
            None
        } else {
            Some(x.conj().inv())
        }
    };

    let (a, b, c, d) = (
        f.zeros(Factor::A),
        f.zeros(Factor::B),
        f.zeros(Factor::C),
        f.zeros(Factor::D),
    );
    let mut candidates: Vec<(GR, GR)> = Vec::new();
    // zero line of one factor against pole line of its partner, per coordinate
    for (zs, ws) in [(a, b), (c, d)] {
        for x in zs {
            for y in ws {
                if let Some(py) = inv_conj(y, 'w', &mut warnings) {
                    candidates.push((x.clone(), py));
                }
                if let Some(px) = inv_conj(x, 'z', &mut warnings) {
                    candidates.push((px, y.clone()));
                }
            }
        }
    }
    // pole lines of the first coordinate against pole lines of the second
    for (zs, ws) in [(a, d), (c, b)] {
        for x in zs {
            for y in ws {
                if let (Some(px), Some(py)) = (inv_conj(x, 'z', &mut warnings), inv_conj(y, 'w', &mut warnings)) {
                    candidates.push((px, py));
                }
            }
        }
    }
    warnings.sort();
    warnings.dedup();

    let total = candidates.len();
    let mut finite = Vec::with_capacity(total);
    let mut dropped = 0usize;
    for (z, w) in candidates {
        if vanishes(&[z.clone(), w.clone(), GR::one()]) {
            finite.push((z, w));
        } else {
            dropped += 1;
        }
    }
    finite.sort();
    finite.dedup();
    if dropped > 0 {
        warnings.push(format!("{dropped} candidate intersections are not indeterminate after cancellation"));
    }
    let merged = total - dropped - finite.len();
    if merged > 0 {
        warnings.push(format!("{merged} candidate intersections coincide"));
    }

    let infinite = [
        [GR::one(), GR::zero(), GR::zero()],
        [GR::zero(), GR::one(), GR::zero()],
    ]
    .into_iter()
    .filter(|p| vanishes(p))
    .collect();
    IndetSet {
        finite,
        infinite,
        warnings,
    }
}

/// `c * prod (x - a) / (1 - conj(a) x)` with an arbitrary nonzero constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScaledBlaschke {
    #[serde(serialize_with = "ser_gr")]
    pub scale: GR,
    #[serde(serialize_with = "ser_grs")]
    pub zeros: Vec<GR>,
}

fn ser_gr<S: serde::Serializer>(x: &GR, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_grs<S: serde::Serializer>(xs: &[GR], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

impl ScaledBlaschke {
    /// Number of preimages of a generic value.
    pub fn degree(&self) -> usize {
        if self.scale.is_zero() {
            0
        } else {
            self.zeros.len()
        }
    }

    pub fn numerator(&self) -> UniPoly {
        UniPoly::from_roots(&self.zeros).scale(&self.scale)
    }

    pub fn denominator(&self) -> UniPoly {
        UniPoly::from_poles(&self.zeros)
    }

    pub fn eval(&self, x: &GR) -> Option<GR> {
        let q = self.denominator().eval(x);
        if q.is_zero() {
            None
        } else {
            Some(&self.numerator().eval(x) / &q)
        }
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        let mut acc = self.scale.to_c64();
        for a in &self.zeros {
            let a = a.to_c64();
            acc *= (x - a) / (1.0 - a.conj() * x);
        }
        acc
    }

    pub fn derivative_at(&self, x: &GR) -> Option<GR> {
        let (p, q) = (self.numerator(), self.denominator());
        let qx = q.eval(x);
        if qx.is_zero() {
            return None;
        }
        let num = &(&p.derivative().eval(x) * &qx) - &(&p.eval(x) * &q.derivative().eval(x));
        Some(&num / &(&qx * &qx))
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }
}

/// Which of the two blown-up points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum InfinitePoint {
    /// `[1:0:0]`, approached along `z -> infinity`.
    X,
    /// `[0:1:0]`, approached along `w -> infinity`.
    Y,
}

/// The map induced on the exceptional curve over `[1:0:0]` or `[0:1:0]`,
/// as a pair of one-variable maps of the slope parameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionMap {
    pub point: InfinitePoint,
    pub coords: [ScaledBlaschke; 2],
}

impl ExtensionMap {
    pub fn eval_c64(&self, lambda: Complex64) -> (Complex64, Complex64) {
        (self.coords[0].eval_c64(lambda), self.coords[1].eval_c64(lambda))
    }
}

/// `prod (-1 / conj(a))`, the value of a Blaschke product at infinity without its rotation.
fn value_at_infinity(zs: &[GR], k: Factor) -> Result<GR> {
    let mut acc = GR::one();
    for a in zs {
        if a.is_zero() {
            return Err(Error::ZeroAtOrigin { factor: k.label() });
        }
        acc = &acc * &(-a.conj().inv());
    }
    Ok(acc)
}

pub fn exceptional_extension(f: &Blaschke2D, point: InfinitePoint) -> Result<ExtensionMap> {
    // the variable sent to infinity and the factors that keep depending on lambda
    let (fixed, moving) = match point {
        InfinitePoint::X => ([Factor::A, Factor::C], [Factor::B, Factor::D]),
        InfinitePoint::Y => ([Factor::B, Factor::D], [Factor::A, Factor::C]),
    };
    let mut coords = Vec::with_capacity(2);
    for c in 0..2 {
        let s = value_at_infinity(f.zeros(fixed[c]), fixed[c])?;
        coords.push(ScaledBlaschke {
            scale: &s * f.theta(c),
            zeros: f.zeros(moving[c]).to_vec(),
        });
    }
    Ok(ExtensionMap {
        point,
        coords: coords.try_into().expect("two coordinates"),
    })
}

pub fn exceptional_extensions(f: &Blaschke2D) -> Result<[ExtensionMap; 2]> {
    Ok([
        exceptional_extension(f, InfinitePoint::X)?,
        exceptional_extension(f, InfinitePoint::Y)?,
    ])
}

/// How a pole line covers an exceptional curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoleLineCover {
    pub target: InfinitePoint,
    /// `'z'` or `'w'`: the coordinate that parameterizes the line.
    pub variable: char,
    pub map: ScaledBlaschke,
    pub degree: usize,
}

/// Covering map from a pole line onto the exceptional curve it is sent to.
pub fn pole_line_cover(f: &Blaschke2D, line: &ProjLine) -> Result<PoleLineCover> {
    let k = match line.kind {
        LineKind::Pole(k) => k,
        _ => return Err(Error::NotAPoleLine),
    };
    let a = f.zeros(k).get(line.index).ok_or(Error::NotAPoleLine)?;
    if a.is_zero() || pole_line(k, a) != line.form {
        return Err(Error::NotAPoleLine);
    }
    let at = a.conj().inv();
    // poles of the first coordinate land on [1:0:0] and are read off the second
    // coordinate, and conversely
    let (target, coord, partner_same_var, partner_other_var) = match k {
        Factor::A => (InfinitePoint::X, 1, Factor::C, Factor::D),
        Factor::B => (InfinitePoint::X, 1, Factor::D, Factor::C),
        Factor::C => (InfinitePoint::Y, 0, Factor::A, Factor::B),
        Factor::D => (InfinitePoint::Y, 0, Factor::B, Factor::A),
    };
    let mut scale = f.theta(coord).clone();
    for c in f.zeros(partner_same_var) {
        let den = &GR::one() - &(&c.conj() * &at);
        if den.is_zero() {
            return Err(Error::CoincidentZeros(format!(
                "zero {a} of {} is also a zero of {}",
                k.label(),
                partner_same_var.label()
            )));
        }
        scale = &scale * &(&(&at - c) / &den);
    }
    let map = ScaledBlaschke {
        scale,
        zeros: f.zeros(partner_other_var).to_vec(),
    };
    Ok(PoleLineCover {
        target,
        variable: if k.in_z() { 'w' } else { 'z' },
        degree: map.degree(),
        map,
    })
}

/// Numerator of `Jf = A'B C D' - A B' C' D` over the common denominator
/// `(Q_A Q_B Q_C Q_D)^2`, where `Q` is the pole polynomial of each factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalJacobian {
    /// Homogenized in `T`, so `numerator(z, w, 1)` is the affine numerator.
    pub numerator: TriPoly,
}

impl CriticalJacobian {
    pub fn eval(&self, z: &GR, w: &GR) -> GR {
        self.numerator.eval(&[z.clone(), w.clone(), GR::one()])
    }

    pub fn eval_c64(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.numerator.eval_c64([z, w, Complex64::new(1.0, 0.0)])
    }

    /// The numerator scaled to lex-leading coefficient 1: the vanishing locus
    /// as an exact object, independent of rotations.
    pub fn vanishing_locus(&self) -> TriPoly {
        self.numerator.normalized()
    }
}

/// `sum_k c_k * p_k(z) * q_k(w)` as a homogeneous polynomial.
fn separable_sum(terms: &[(GR, UniPoly, UniPoly)]) -> TriPoly {
    let deg = terms
        .iter()
        .filter(|(c, p, q)| !c.is_zero() && !p.is_zero() && !q.is_zero())
        .map(|(_, p, q)| p.degree().unwrap_or(0) + q.degree().unwrap_or(0))
        .max()
        .unwrap_or(0) as u32;
    let mut acc = TriPoly::zero(deg);
    for (c, p, q) in terms {
        let mut items = Vec::new();
        for (i, x) in p.coeffs().iter().enumerate() {
            for (j, y) in q.coeffs().iter().enumerate() {
                let v = &(c * x) * y;
                let (i, j) = (i as u32, j as u32);
                items.push(([i, j, deg - i - j], v));
            }
        }
        let mut t = TriPoly::zero(deg);
        for (e, v) in items {
            t = t.add(&TriPoly::from_terms(deg, [(e, v)]));
        }
        acc = acc.add(&t);
    }
    acc
}

pub fn critical_jacobian(f: &Blaschke2D) -> CriticalJacobian {
    let parts = |k: Factor| {
        let b = f.factor(k);
        let (p, q) = (b.numerator(), b.denominator());
        // derivative numerator p' q - p q'
        let n = p.derivative().mul(&q).sub(&p.mul(&q.derivative()));
        (p, q, n)
    };
    let (pa, qa, na) = parts(Factor::A);
    let (pb, qb, nb) = parts(Factor::B);
    let (pc, qc, nc) = parts(Factor::C);
    let (pd, qd, nd) = parts(Factor::D);
    let numerator = separable_sum(&[
        (GR::one(), na.mul(&pc).mul(&qc), pb.mul(&nd).mul(&qb)),
        (-GR::one(), pa.mul(&nc).mul(&qa), nb.mul(&pd).mul(&qd)),
    ]);
    CriticalJacobian { numerator }
}
