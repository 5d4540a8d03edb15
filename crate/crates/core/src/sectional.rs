//! Cosets of `E_k = {(k·x*ᵀ, r·k)}` in operator × vector space, sectional
//! hulls of finite clouds, and a sampling test for sectional convexity.
//!
//! The direction is a raw nonzero vector: sections along directions outside
//! the cone are legitimate objects and are where convexity can fail.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conjugate::{EpiPoint, LinearOperator};
use crate::error::{Error, Result};
use crate::linalg::{axpy, max_abs};
use crate::lp::convex_hull_membership;

pub const COSET_TOL: f64 = 1e-8;
pub const CLOSURE_EPS: f64 = 1e-6;

/// Coordinates `(x*, r)` of a point relative to a coset representative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectionCoord {
    pub xstar: Vec<f64>,
    pub r: f64,
}

impl SectionCoord {
    pub fn flat(&self) -> Vec<f64> {
        let mut v = self.xstar.clone();
        v.push(self.r);
        v
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionCoset {
    pub representative: EpiPoint,
    pub members: Vec<SectionCoord>,
    /// Input indices landing in this coset, in input order.
    pub sources: Vec<usize>,
    pub direction: Vec<f64>,
}

fn check_direction(k: &[f64]) -> Result<usize> {
    let (i0, kmax) = k.iter().enumerate().fold((0, 0.0), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc });
    if kmax == 0.0 {
        return Err(Error::Invalid("section direction must be nonzero".into()));
    }
    Ok(i0)
}

/// `(L₀ + k·x*ᵀ, y₀ + r·k)`.
pub fn lift(base: &EpiPoint, k: &[f64], c: &SectionCoord) -> EpiPoint {
    let op = base.op.add(&LinearOperator::rank_one(k, &c.xstar));
    EpiPoint { op, y: axpy(&base.y, c.r, k) }
}

/// Coordinates of `q` relative to `base` when `q − base ∈ E_k`.
pub fn section_coords(base: &EpiPoint, q: &EpiPoint, k: &[f64], tol: f64) -> Result<Option<SectionCoord>> {
    let i0 = check_direction(k)?;
    if base.op.rows() != k.len() || q.op.rows() != k.len() || base.op.cols() != q.op.cols() {
        return Err(Error::Dimension { what: "section point", expected: k.len(), found: q.op.rows() });
    }
    let dl = q.op.sub(&base.op);
    let xstar: Vec<f64> = dl.row(i0).iter().map(|v| v / k[i0]).collect();
    let r = (q.y[i0] - base.y[i0]) / k[i0];
    let scale = 1.0 + max_abs(q.op.data()).max(max_abs(base.op.data())).max(max_abs(&q.y)).max(max_abs(&base.y));
    let fit = dl.sub(&LinearOperator::rank_one(k, &xstar));
    let yres = (0..k.len()).map(|i| (q.y[i] - base.y[i] - r * k[i]).abs()).fold(0.0, f64::max);
    if max_abs(fit.data()) <= tol * scale && yres <= tol * scale {
        Ok(Some(SectionCoord { xstar, r }))
    } else {
        Ok(None)
    }
}

/// Greedy partition of `points` into cosets of `E_k`; repeated coordinates
/// inside a coset are stored once.
pub fn coset_decompose(points: &[EpiPoint], k: &[f64], tol: f64) -> Result<Vec<SectionCoset>> {
    check_direction(k)?;
    let mut cosets: Vec<SectionCoset> = Vec::new();
    'next: for (idx, p) in points.iter().enumerate() {
        for c in cosets.iter_mut() {
            if let Some(coord) = section_coords(&c.representative, p, k, tol)? {
                c.sources.push(idx);
                if !c.members.iter().any(|m| m.flat().iter().zip(coord.flat()).all(|(a, b)| (a - b).abs() <= tol)) {
                    c.members.push(coord);
                }
                continue 'next;
            }
        }
        cosets.push(SectionCoset {
            representative: p.clone(),
            members: vec![SectionCoord { xstar: vec![0.0; p.op.cols()], r: 0.0 }],
            sources: vec![idx],
            direction: k.to_vec(),
        });
    }
    Ok(cosets)
}

/// `q ∈ sco_k N`: the coset of `q` is occupied and the coordinates of `q`
/// lie in the convex hull of the coset members.
pub fn sectional_hull_contains(points: &[EpiPoint], k: &[f64], q: &EpiPoint, tol: f64) -> Result<bool> {
    sectional_closure_contains(points, k, q, tol, 0.0)
}

/// As [`sectional_hull_contains`] with hull membership relaxed by `eps` in
/// the max norm of section coordinates.
pub fn sectional_closure_contains(points: &[EpiPoint], k: &[f64], q: &EpiPoint, tol: f64, eps: f64) -> Result<bool> {
    for c in coset_decompose(points, k, tol)? {
        if let Some(coord) = section_coords(&c.representative, q, k, tol)? {
            let cloud: Vec<Vec<f64>> = c.members.iter().map(SectionCoord::flat).collect();
            let hull_tol = if eps > 0.0 { eps } else { tol };
            return Ok(convex_hull_membership(&cloud, &coord.flat(), hull_tol)?.is_some());
        }
    }
    Ok(false)
}

/// Sampling plan for [`is_sectionally_convex`].
#[derive(Debug, Clone)]
pub struct ProbePlan {
    pub seed: u64,
    /// Random coset pairs with both endpoints accepted.
    pub pairs: usize,
    /// Attempts allowed per requested pair before giving up.
    pub attempts_per_pair: usize,
    /// Half-width of the box for base operator entries.
    pub op_box: f64,
    /// Half-width of the box for base vector entries.
    pub y_box: f64,
    /// Half-width of the box for section coordinates.
    pub coord_box: f64,
    /// Pairs checked before the random ones.
    pub seeded: Vec<(EpiPoint, EpiPoint)>,
    /// Operator shape `(m, n)`.
    pub shape: (usize, usize),
}

impl ProbePlan {
    pub fn new(shape: (usize, usize), seed: u64, pairs: usize) -> Self {
        ProbePlan { seed, pairs, attempts_per_pair: 50, op_box: 1.0, y_box: 3.0, coord_box: 2.0, seeded: Vec::new(), shape }
    }
}

#[derive(Debug, Clone, Serialize)]
pub enum SectionalVerdict {
    Pass { probed: usize, attempts: usize },
    Fail { first: EpiPoint, second: EpiPoint, midpoint: EpiPoint },
}

impl SectionalVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, SectionalVerdict::Pass { .. })
    }
}

/// Looks for accepted `a₁, a₂` with `a₁ − a₂ ∈ E_k` and rejected midpoint.
pub fn is_sectionally_convex(oracle: impl Fn(&EpiPoint) -> bool, k: &[f64], plan: &ProbePlan) -> Result<SectionalVerdict> {
    check_direction(k)?;
    let (m, n) = plan.shape;
    if k.len() != m {
        return Err(Error::Dimension { what: "section direction", expected: m, found: k.len() });
    }
    let midpoint = |a: &EpiPoint, b: &EpiPoint| EpiPoint {
        op: LinearOperator::new(m, n, a.op.data().iter().zip(b.op.data()).map(|(x, y)| 0.5 * (x + y)).collect()).unwrap(),
        y: a.y.iter().zip(&b.y).map(|(x, y)| 0.5 * (x + y)).collect(),
    };
    let mut probed = 0;
    for (a, b) in &plan.seeded {
        if section_coords(a, b, k, COSET_TOL)?.is_none() {
            return Err(Error::Invalid("seeded pair does not share a coset".into()));
        }
        if oracle(a) && oracle(b) {
            probed += 1;
            let mid = midpoint(a, b);
            if !oracle(&mid) {
                return Ok(SectionalVerdict::Fail { first: a.clone(), second: b.clone(), midpoint: mid });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut attempts = 0;
    let budget = plan.pairs * plan.attempts_per_pair.max(1);
    let mut accepted = 0;
    while accepted < plan.pairs && attempts < budget {
        attempts += 1;
        let op = (0..m * n).map(|_| rng.gen_range(-plan.op_box..=plan.op_box)).collect();
        let base = EpiPoint { op: LinearOperator::new(m, n, op)?, y: (0..m).map(|_| rng.gen_range(-plan.y_box..=plan.y_box)).collect() };
        let mut coord = || SectionCoord {
            xstar: (0..n).map(|_| rng.gen_range(-plan.coord_box..=plan.coord_box)).collect(),
            r: rng.gen_range(-plan.coord_box..=plan.coord_box),
        };
        let (c1, c2) = (coord(), coord());
        let a = lift(&base, k, &c1);
        let b = lift(&base, k, &c2);
        if !(oracle(&a) && oracle(&b)) {
            continue;
        }
        accepted += 1;
        let mid = midpoint(&a, &b);
        if !oracle(&mid) {
            return Ok(SectionalVerdict::Fail { first: a, second: b, midpoint: mid });
        }
    }
    Ok(SectionalVerdict::Pass { probed: probed + accepted, attempts })
}
