//! Dynamics on the invariant torus and backward orbits towards it.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::blaschke::{Blaschke2D, Factor, NumericMap};
use crate::error::{Error, Result};
use crate::solver::{solve_system, SolverConfig};

/// `(e^{2 pi i x}, e^{2 pi i y})` with `x, y` in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TorusPoint {
    pub x: f64,
    pub y: f64,
}

impl TorusPoint {
    pub fn new(x: f64, y: f64) -> Self {
        TorusPoint {
            x: x.rem_euclid(1.0),
            y: y.rem_euclid(1.0),
        }
    }

    pub fn to_complex(self) -> (Complex64, Complex64) {
        (Complex64::from_polar(1.0, TAU * self.x), Complex64::from_polar(1.0, TAU * self.y))
    }
}

/// Angle difference in turns, reduced to `[-1/2, 1/2)`.
fn wrap(d: f64) -> f64 {
    (d + 0.5).rem_euclid(1.0) - 0.5
}

fn turns(z: Complex64) -> f64 {
    (z.arg() / TAU).rem_euclid(1.0)
}

/// `max(||z| - 1|, ||w| - 1|)`.
pub fn torus_distance(z: Complex64, w: Complex64) -> f64 {
    (z.norm() - 1.0).abs().max((w.norm() - 1.0).abs())
}

/// The restriction of a map to the torus.
#[derive(Clone, Debug)]
pub struct TorusMap {
    nm: NumericMap,
}

impl TorusMap {
    pub fn new(f: &Blaschke2D) -> Self {
        TorusMap { nm: NumericMap::new(f) }
    }

    /// Image point and the modulus drift removed by renormalizing it.
    pub fn step_with_drift(&self, pt: TorusPoint) -> (TorusPoint, f64) {
        let (z, w) = pt.to_complex();
        let (x, y) = self.nm.eval(z, w);
        (TorusPoint::new(turns(x), turns(y)), torus_distance(x, y))
    }

    pub fn step(&self, pt: TorusPoint) -> TorusPoint {
        self.step_with_drift(pt).0
    }

    pub fn iterate(&self, mut pt: TorusPoint, n: u32) -> TorusPoint {
        for _ in 0..n {
            pt = self.step(pt);
        }
        pt
    }
}

pub fn torus_step(f: &Blaschke2D, pt: TorusPoint) -> TorusPoint {
    TorusMap::new(f).step(pt)
}

/// Largest modulus drift along an orbit of `steps` points.
pub fn orbit_drift(f: &Blaschke2D, mut pt: TorusPoint, steps: usize) -> f64 {
    let tm = TorusMap::new(f);
    let mut worst = 0.0f64;
    for _ in 0..steps {
        let (next, d) = tm.step_with_drift(pt);
        worst = worst.max(d);
        pt = next;
    }
    worst
}

/// Increments above this (in turns) trigger a subdivision.
const WINDING_STEP: f64 = 0.1;
/// A quarter turn: larger increments cannot be lifted unambiguously.
const WINDING_JUMP: f64 = 0.25;
const WINDING_MAX_LEVEL: u32 = 40;
/// Cap on the initial grid of a winding computation.
pub const WINDING_GRID_LIMIT: usize = 50_000_000;

fn lift_increment(
    g: &dyn Fn(f64) -> TorusPoint,
    t0: f64,
    t1: f64,
    v0: TorusPoint,
    v1: TorusPoint,
    level: u32,
) -> Result<[f64; 2]> {
    let d = [wrap(v1.x - v0.x), wrap(v1.y - v0.y)];
    let big = d[0].abs().max(d[1].abs());
    if big <= WINDING_STEP {
        return Ok(d);
    }
    if level >= WINDING_MAX_LEVEL {
        return if big <= WINDING_JUMP { Ok(d) } else { Err(Error::LiftDiscontinuity) };
    }
    let tm = 0.5 * (t0 + t1);
    let vm = g(tm);
    let a = lift_increment(g, t0, tm, v0, vm, level + 1)?;
    let b = lift_increment(g, tm, t1, vm, v1, level + 1)?;
    Ok([a[0] + b[0], a[1] + b[1]])
}

/// Winding numbers of both image coordinates along a closed loop `g` on
/// `[0, 1]`, sampled on `grid` intervals.
fn winding(g: &dyn Fn(f64) -> TorusPoint, grid: usize) -> Result<[i64; 2]> {
    let mut total = [0.0f64; 2];
    let mut prev = g(0.0);
    for k in 1..=grid {
        let t = k as f64 / grid as f64;
        let cur = g(t);
        let d = lift_increment(g, (k - 1) as f64 / grid as f64, t, prev, cur, 0)?;
        total[0] += d[0];
        total[1] += d[1];
        prev = cur;
    }
    Ok([total[0].round() as i64, total[1].round() as i64])
}

/// Bound on the angular speed of `f` on the torus, in the max norm:
/// `|d arg B / d arg x| <= sum (1 + |a|) / (1 - |a|)` for each factor.
pub fn torus_speed_bound(f: &Blaschke2D) -> f64 {
    let speed = |k: Factor| {
        f.zeros(k)
            .iter()
            .map(|a| {
                let r = a.to_c64().norm();
                (1.0 + r) / (1.0 - r)
            })
            .sum::<f64>()
    };
    (speed(Factor::A) + speed(Factor::B)).max(speed(Factor::C) + speed(Factor::D))
}

/// Action of `f^n` on first homology: column `j` holds the winding numbers of
/// the image of `gamma_j`, where `gamma_1 = {w = 1}` and `gamma_2 = {z = 1}`.
pub fn homology_action(f: &Blaschke2D, n: u32) -> Result<[[i64; 2]; 2]> {
    if n == 0 {
        return Err(Error::InvalidArgument("iterate count must be at least 1".into()));
    }
    // grid increments stay below WINDING_JUMP, so no full turn is missed
    let bound = torus_speed_bound(f).powi(n as i32) / WINDING_JUMP;
    if !(bound < WINDING_GRID_LIMIT as f64) {
        return Err(Error::RefinementBudget { limit: WINDING_GRID_LIMIT });
    }
    let grid = (bound.ceil() as usize).max(64);
    let tm = TorusMap::new(f);
    let c1 = winding(&|t| tm.iterate(TorusPoint::new(t, 0.0), n), grid)?;
    let c2 = winding(&|t| tm.iterate(TorusPoint::new(0.0, t), n), grid)?;
    Ok([[c1[0], c2[0]], [c1[1], c2[1]]])
}

/// Parameters for [`curve_growth_entropy`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveGrowth {
    /// Image segments longer than this (in turns) are split.
    pub max_segment: f64,
    /// Cap on the number of segments processed over all iterates.
    pub segment_budget: usize,
}

impl Default for CurveGrowth {
    fn default() -> Self {
        CurveGrowth {
            max_segment: 0.01,
            segment_budget: 200_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyEstimate {
    /// Least-squares slope of `log length` over the last third of iterates.
    pub entropy: f64,
    /// `log length(f^k(gamma_1))` for `k = 0..=n_max`.
    pub log_lengths: Vec<f64>,
    pub segments: usize,
}

fn seg_len(p: TorusPoint, q: TorusPoint) -> f64 {
    wrap(q.x - p.x).hypot(wrap(q.y - p.y))
}

fn midpoint(p: TorusPoint, q: TorusPoint) -> TorusPoint {
    TorusPoint::new(p.x + 0.5 * wrap(q.x - p.x), p.y + 0.5 * wrap(q.y - p.y))
}

/// Growth rate of the length of `f^k(gamma_1)`, with `samples` initial
/// points on `gamma_1`.
pub fn curve_growth_entropy(f: &Blaschke2D, n_max: u32, samples: usize) -> Result<EntropyEstimate> {
    curve_growth_entropy_with(f, n_max, samples, &CurveGrowth::default())
}

pub fn curve_growth_entropy_with(
    f: &Blaschke2D,
    n_max: u32,
    samples: usize,
    cfg: &CurveGrowth,
) -> Result<EntropyEstimate> {
    if n_max < 3 {
        return Err(Error::InvalidArgument("entropy needs at least 3 iterates".into()));
    }
    let tm = TorusMap::new(f);
    let h = cfg.max_segment;
    let k0 = samples.max((1.0 / h).ceil() as usize + 1);
    let mut lengths = vec![0.0f64; n_max as usize + 1];
    let mut processed = 0usize;
    // depth-first over segments keeps memory proportional to n_max
    let mut stack: Vec<(u32, TorusPoint, TorusPoint)> = (0..k0)
        .rev()
        .map(|i| {
            let a = TorusPoint::new(i as f64 / k0 as f64, 0.0);
            let b = TorusPoint::new((i + 1) as f64 / k0 as f64, 0.0);
            (0, a, b)
        })
        .collect();
    while let Some((k, p, q)) = stack.pop() {
        processed += 1;
        if processed > cfg.segment_budget {
            return Err(Error::RefinementBudget { limit: cfg.segment_budget });
        }
        lengths[k as usize] += seg_len(p, q);
        if k == n_max {
            continue;
        }
        // split p..q at level k until every image piece is short
        let mut pieces = vec![(p, q, tm.step(p), tm.step(q))];
        while let Some((a, b, fa, fb)) = pieces.pop() {
            if seg_len(fa, fb) <= h || seg_len(a, b) < 1e-12 {
                stack.push((k + 1, fa, fb));
            } else {
                let m = midpoint(a, b);
                let fm = tm.step(m);
                pieces.push((a, m, fa, fm));
                pieces.push((m, b, fm, fb));
            }
        }
    }
    let log_lengths: Vec<f64> = lengths.iter().map(|l| l.ln()).collect();
    let start = n_max as usize - (n_max as usize / 3);
    let xs: Vec<f64> = (start..=n_max as usize).map(|k| k as f64).collect();
    let ys = &log_lengths[start..];
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(EntropyEstimate {
        entropy: sxy / sxx,
        log_lengths,
        segments: processed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FixedPoint {
    pub point: (Complex64, Complex64),
    /// `max |f(e) - e|` in the chart of the point.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// The interior fixed point `e`, and the exterior one `e'` in the chart
/// `(1/z, 1/w)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AttractingPair {
    pub interior: FixedPoint,
    pub exterior: FixedPoint,
}

impl AttractingPair {
    /// Fails unless both iterations reached the tolerance.
    pub fn require_converged(self) -> Result<Self> {
        for (name, p) in [("interior", self.interior), ("exterior", self.exterior)] {
            if !p.converged {
                return Err(Error::NonConvergence(format!(
                    "{name} fixed point: residual {:e} after {} iterations at {:?}",
                    p.residual, p.iterations, p.point
                )));
            }
        }
        Ok(self)
    }
}

pub const ATTRACTING_MAX_ITER: usize = 100_000;

fn iterate_to_fixed(nm: &NumericMap, tol: f64) -> FixedPoint {
    let mut p = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut residual = f64::INFINITY;
    for it in 0..ATTRACTING_MAX_ITER {
        let q = nm.eval(p.0, p.1);
        residual = (q.0 - p.0).norm().max((q.1 - p.1).norm());
        if residual < tol {
            return FixedPoint {
                point: p,
                residual,
                iterations: it,
                converged: true,
            };
        }
        p = q;
    }
    FixedPoint {
        point: p,
        residual,
        iterations: ATTRACTING_MAX_ITER,
        converged: false,
    }
}

/// Iterates from the origin of each chart. In the chart `(1/z, 1/w)` the map
/// is `1 / f(1/u, 1/v)`, which for Blaschke products is the map with
/// conjugated coefficients.
pub fn attracting_pair(f: &Blaschke2D, tol: f64) -> AttractingPair {
    AttractingPair {
        interior: iterate_to_fixed(&NumericMap::new(f), tol),
        exterior: iterate_to_fixed(&NumericMap::new(&f.conjugate()), tol),
    }
}

/// Upper bucket edges of the distance histogram; the last bucket is open.
pub const DIST_BUCKETS: [f64; 6] = [1e-12, 1e-8, 1e-4, 0.01, 0.05, 0.2];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub upper_edges: Vec<f64>,
    /// One more count than edges.
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn of(values: &[f64]) -> Self {
        let mut counts = vec![0usize; DIST_BUCKETS.len() + 1];
        for &v in values {
            let k = DIST_BUCKETS.iter().position(|&e| v < e).unwrap_or(DIST_BUCKETS.len());
            counts[k] += 1;
        }
        Histogram {
            upper_edges: DIST_BUCKETS.to_vec(),
            counts,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointCloud {
    pub points: Vec<(Complex64, Complex64)>,
    /// Uniform, summing to 1.
    pub weights: Vec<f64>,
    pub depth: u32,
    /// Distance to the torus of each endpoint.
    pub dist: Vec<f64>,
    pub histogram: Histogram,
    /// Nodes where fewer than `d_top` preimages were found.
    pub deficiencies: usize,
    /// Orbits abandoned because a node had no preimage.
    pub dropped: usize,
    /// Largest distance to the torus over every preimage computed.
    pub max_node_dist: f64,
    /// Share of endpoints farther than 0.05 from the torus.
    pub far_fraction: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BackwardSampling {
    pub depth: u32,
    pub samples: usize,
    pub seed: u64,
    /// Expected preimage count at each node.
    pub d_top: usize,
}

struct Orbit {
    end: Option<(Complex64, Complex64)>,
    deficiencies: usize,
    max_dist: f64,
}

fn backward_orbit(f: &Blaschke2D, start: (Complex64, Complex64), p: &BackwardSampling, i: usize, cfg: &SolverConfig) -> Result<Orbit> {
    // one independent stream per sample: results do not depend on scheduling
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    rng.set_stream(i as u64);
    let mut cur = start;
    let mut out = Orbit {
        end: None,
        deficiencies: 0,
        max_dist: 0.0,
    };
    for _ in 0..p.depth {
        let sols = solve_system(f, cur, cfg)?;
        if sols.len() < p.d_top {
            out.deficiencies += 1;
        }
        for &(z, w) in &sols.points {
            out.max_dist = out.max_dist.max(torus_distance(z, w));
        }
        if sols.is_empty() {
            return Ok(out);
        }
        cur = sols.points[rng.random_range(0..sols.len())];
    }
    out.end = Some(cur);
    Ok(out)
}

/// Endpoints of independent random backward orbits of `x`, choosing a
/// preimage uniformly at each step.
pub fn backward_measure_sample(f: &Blaschke2D, x: TorusPoint, p: &BackwardSampling) -> Result<PointCloud> {
    backward_measure_sample_with(f, x, p, &SolverConfig::default())
}

pub fn backward_measure_sample_with(
    f: &Blaschke2D,
    x: TorusPoint,
    p: &BackwardSampling,
    cfg: &SolverConfig,
) -> Result<PointCloud> {
    let start = x.to_complex();
    let orbits = (0..p.samples)
        .into_par_iter()
        .map(|i| backward_orbit(f, start, p, i, cfg))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<_> = orbits.iter().filter_map(|o| o.end).collect();
    let dist: Vec<f64> = points.iter().map(|&(z, w)| torus_distance(z, w)).collect();
    let n = points.len();
    let far = dist.iter().filter(|&&d| d > 0.05).count();
    Ok(PointCloud {
        weights: vec![1.0 / n.max(1) as f64; n],
        depth: p.depth,
        histogram: Histogram::of(&dist),
        deficiencies: orbits.iter().map(|o| o.deficiencies).sum(),
        dropped: p.samples - n,
        max_node_dist: orbits.iter().map(|o| o.max_dist).fold(0.0, f64::max),
        far_fraction: if n == 0 { 0.0 } else { far as f64 / n as f64 },
        dist,
        points,
    })
}
