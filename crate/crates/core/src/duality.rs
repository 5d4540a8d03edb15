//! Primal and dual solvers for the robust vector problem and its perturbations.
//!
//! Inner weak infima are represented by their attained weak-minimal points and
//! the outer weak supremum is taken over the union of those points.

use serde::Serialize;

use crate::cones::{dual_cone_directions, DualVector, PolyhedralCone, MAGNITUDE_LADDER};
use crate::conjugate::{composite_k, composite_t, ExtValue, LinearOperator, VectorMap};
use crate::error::{Error, Result};
use crate::farkas::{is_positive_operator, is_weak_positive_operator, RobustInstance};
use crate::instance::LoadedInstance;
use crate::linalg::{add, neg, sub};
use crate::order::{directional_offset, FiniteValueSet};

pub use crate::scalar::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    Rvd,
    RvdW,
    RvdK,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimalReport {
    pub perturbation: LinearOperator,
    /// Indices of `A ∩ dom F`.
    pub feasible: Vec<usize>,
    /// `F(x) − L(x)` for each feasible index, same order.
    pub values: Vec<Vec<f64>>,
    /// Positions in `values` of the weak minima.
    pub wmin: Vec<usize>,
    /// A weak minimum sits on the edge of the ground box and the values
    /// still decrease towards it; the grid may be hiding an unbounded problem.
    pub possibly_unbounded: bool,
}

impl PrimalReport {
    pub fn value_set<'a>(&self, cone: &'a PolyhedralCone) -> Result<FiniteValueSet<'a>> {
        Ok(FiniteValueSet::new(cone, self.values.clone())?)
    }

    pub fn wmin_values(&self) -> Vec<Vec<f64>> {
        self.wmin.iter().map(|&i| self.values[i].clone()).collect()
    }
}

/// `F − L` as a map.
pub fn perturbed_objective(inst: &RobustInstance, l: &LinearOperator) -> Result<VectorMap> {
    check_operator(inst, l)?;
    let values = (0..inst.ground.len())
        .map(|x| match inst.f.get(x) {
            Some(fx) => ExtValue::Finite(sub(fx, &l.apply(inst.ground.point(x)))),
            None => ExtValue::PlusInf,
        })
        .collect();
    VectorMap::new(inst.m(), values)
}

fn check_operator(inst: &RobustInstance, l: &LinearOperator) -> Result<()> {
    if l.rows() != inst.m() || l.cols() != inst.n() {
        return Err(Error::Dimension { what: "perturbation", expected: inst.m() * inst.n(), found: l.rows() * l.cols() });
    }
    Ok(())
}

pub fn solve_primal(inst: &RobustInstance, l: &LinearOperator) -> Result<PrimalReport> {
    let obj = perturbed_objective(inst, l)?;
    let feasible: Vec<usize> = inst.feasible_set().into_iter().filter(|&x| obj.get(x).is_some()).collect();
    let values: Vec<Vec<f64>> = feasible.iter().map(|&x| obj.get(x).unwrap().to_vec()).collect();
    let set = FiniteValueSet::new(&inst.k_cone, values.clone())?;
    let wmin = set.wmin_indices();
    let possibly_unbounded = wmin.iter().any(|&i| edge_descent(inst, &feasible, &values, i));
    Ok(PrimalReport { perturbation: l.clone(), feasible, values, wmin, possibly_unbounded })
}

/// Is `values[i]` on the ground-box boundary with its nearest feasible
/// neighbour strictly above it?
fn edge_descent(inst: &RobustInstance, feasible: &[usize], values: &[Vec<f64>], i: usize) -> bool {
    let pts = inst.ground.points();
    let x = &pts[feasible[i]];
    let on_edge = (0..inst.n()).any(|d| {
        let lo = pts.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|p| p[d]).fold(f64::NEG_INFINITY, f64::max);
        x[d] == lo || x[d] == hi
    });
    if !on_edge || feasible.len() < 2 {
        return false;
    }
    let dist = |j: usize| pts[feasible[j]].iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
    let nb = (0..feasible.len()).filter(|&j| j != i).min_by(|&a, &b| dist(a).total_cmp(&dist(b))).unwrap();
    inst.k_cone.in_interior(&sub(&values[nb], &values[i]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DualPointCertificate {
    Multiplier { scenario: usize, zstar: DualVector },
    Operator { scenario: usize, op: LinearOperator, s: Vec<f64> },
}

#[derive(Debug, Clone, Serialize)]
pub struct DualPoint {
    pub value: Vec<f64>,
    /// Ground index attaining the inner weak infimum.
    pub x: usize,
    /// Inner problem the point belongs to, numbered in grid order.
    pub group: usize,
    pub certificate: DualPointCertificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscardedCertificate {
    pub op: LinearOperator,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualReport {
    pub variant: Variant,
    pub perturbation: LinearOperator,
    /// Every attained inner weak-minimal point, in grid order.
    pub points: Vec<DualPoint>,
    /// Positions in `points` not strictly dominated by any point of any
    /// inner weak infimum.
    pub wmax: Vec<usize>,
    pub grid_size: usize,
    pub heuristic: bool,
    pub discarded: Vec<DiscardedCertificate>,
}

impl DualReport {
    pub fn wmax_values(&self) -> Vec<Vec<f64>> {
        self.wmax.iter().map(|&i| self.points[i].value.clone()).collect()
    }

    /// Distinct weak-maximal values in first-seen order.
    pub fn wmax_distinct(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for v in self.wmax_values() {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }
}

/// Weak minima of a composite over its domain, tagged with a certificate.
fn inner_frontier(
    cone: &PolyhedralCone,
    map: &VectorMap,
    shift: &[f64],
    cert: &DualPointCertificate,
    group: usize,
    out: &mut Vec<DualPoint>,
) -> Result<()> {
    let dom = map.domain();
    let values: Vec<Vec<f64>> = dom.iter().map(|&x| add(map.get(x).unwrap(), shift)).collect();
    let set = FiniteValueSet::new(cone, values)?;
    for i in set.wmin_indices() {
        out.push(DualPoint { value: set.points()[i].clone(), x: dom[i], group, certificate: cert.clone() });
    }
    Ok(())
}

fn finish(inst: &RobustInstance, variant: Variant, l: &LinearOperator, points: Vec<DualPoint>, grid_size: usize, heuristic: bool, discarded: Vec<DiscardedCertificate>) -> Result<DualReport> {
    if points.is_empty() {
        return Err(Error::Invalid("dual grid produced no attained point".into()));
    }
    let wmax = frontier_maxima(&inst.k_cone, &points);
    Ok(DualReport { variant, perturbation: l.clone(), points, wmax, grid_size, heuristic, discarded })
}

/// An attained point `d` escapes strict domination by the weak infimum
/// `∂(V + K)` of an inner value set exactly when `d ∈ V + K`, and `V + K`
/// is generated by the attained weak minima of `V`. So `d` is weakly maximal
/// in the union of inner weak infima iff it dominates a point of every group.
fn frontier_maxima(cone: &PolyhedralCone, points: &[DualPoint]) -> Vec<usize> {
    let groups = points.last().map_or(0, |p| p.group + 1);
    let mut members: Vec<Vec<&[f64]>> = vec![Vec::new(); groups];
    for p in points {
        members[p.group].push(&p.value);
    }
    members.retain(|g| !g.is_empty());
    // Most points fail on a few groups; trying the last failing group first
    // keeps the scan close to linear.
    let mut order: Vec<usize> = (0..members.len()).collect();
    (0..points.len())
        .filter(|&i| {
            let d = &points[i].value;
            match order.iter().position(|&g| !members[g].iter().any(|v| cone.dominates(d, v))) {
                None => true,
                Some(pos) => {
                    let g = order.remove(pos);
                    order.insert(0, g);
                    false
                }
            }
        })
        .collect()
}

/// Composite with an empty domain contributes nothing.
fn skip_improper(r: Result<VectorMap>) -> Result<Option<VectorMap>> {
    match r {
        Ok(m) => Ok(Some(m)),
        Err(Error::Improper) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `wsup over (z*, u) of winf over x ∈ C of F(x) − L(x) + ⟨z*, G_u(x)⟩k`.
pub fn solve_dual_k(inst: &RobustInstance, l: &LinearOperator, zgrid: &[DualVector]) -> Result<DualReport> {
    if !zgrid.iter().any(|z| z.is_zero()) {
        return Err(Error::GridWithoutZero);
    }
    let obj = perturbed_objective(inst, l)?;
    let zero = vec![0.0; inst.m()];
    let mut points = Vec::new();
    for z in zgrid {
        for (u, s) in inst.scenarios.iter().enumerate() {
            if let Some(map) = skip_improper(composite_k(&obj, &inst.c_mask, z, &s.g, inst.k()))? {
                let cert = DualPointCertificate::Multiplier { scenario: u, zstar: z.clone() };
                let group = points.last().map_or(0, |p: &DualPoint| p.group + 1);
                inner_frontier(&inst.k_cone, &map, &zero, &cert, group, &mut points)?;
            }
        }
    }
    finish(inst, Variant::RvdK, l, points, zgrid.len(), false, Vec::new())
}

/// `wsup over (T, u) ∈ L₊(S,K) × U of winf over x ∈ C of (F − L + T∘G_u)(x)`.
pub fn solve_dual_t(inst: &RobustInstance, l: &LinearOperator, tgrid: &[LinearOperator]) -> Result<DualReport> {
    let obj = perturbed_objective(inst, l)?;
    let zero = vec![0.0; inst.m()];
    let mut points = Vec::new();
    let mut discarded = Vec::new();
    for t in tgrid {
        if !is_positive_operator(t, &inst.s_cone, &inst.k_cone) {
            discarded.push(DiscardedCertificate { op: t.clone(), reason: "not a positive operator".into() });
            continue;
        }
        for (u, s) in inst.scenarios.iter().enumerate() {
            if let Some(map) = skip_improper(composite_t(&obj, &inst.c_mask, t, &s.g))? {
                let cert = DualPointCertificate::Operator { scenario: u, op: t.clone(), s: vec![0.0; inst.p()] };
                let group = points.last().map_or(0, |p: &DualPoint| p.group + 1);
                inner_frontier(&inst.k_cone, &map, &zero, &cert, group, &mut points)?;
            }
        }
    }
    finish(inst, Variant::Rvd, l, points, tgrid.len(), false, discarded)
}

/// Ladder samples `{0} ∪ {t·gⱼ}` of `S`.
pub fn s_ladder(s: &PolyhedralCone) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; s.dim()]];
    for g in s.generators() {
        for t in MAGNITUDE_LADDER {
            out.push(g.iter().map(|v| t * v).collect());
        }
    }
    out
}

/// Weak Lagrangian dual with the inner infimum over `S` truncated to
/// `s_samples`. Positive operators use `s = 0` only. For the remaining weakly
/// positive operators the samples are joined by `s = −G_u(x)` at each
/// `x ∈ C` with `G_u(x) ∈ −S`, the point that reproduces the primal value.
pub fn solve_dual_weak(
    inst: &RobustInstance,
    l: &LinearOperator,
    tgrid: &[LinearOperator],
    s_samples: &[Vec<f64>],
) -> Result<DualReport> {
    let obj = perturbed_objective(inst, l)?;
    let mut points = Vec::new();
    let mut discarded = Vec::new();
    for t in tgrid {
        if !is_weak_positive_operator(t, &inst.s_cone, &inst.k_cone)? {
            discarded.push(DiscardedCertificate { op: t.clone(), reason: "maps a ray of S into -int K; inner value unbounded below".into() });
            continue;
        }
        let positive = is_positive_operator(t, &inst.s_cone, &inst.k_cone);
        for (u, sc) in inst.scenarios.iter().enumerate() {
            let Some(map) = skip_improper(composite_t(&obj, &inst.c_mask, t, &sc.g))? else { continue };
            let mut samples: Vec<Vec<f64>> = if positive { vec![vec![0.0; inst.p()]] } else { s_samples.to_vec() };
            if !positive {
                for x in map.domain() {
                    let g = sc.g.get(x).unwrap();
                    let s = neg(g);
                    if inst.s_cone.contains(&s) && !samples.contains(&s) {
                        samples.push(s);
                    }
                }
            }
            let dom = map.domain();
            let mut values = Vec::new();
            let mut tags = Vec::new();
            for s in &samples {
                let ts = t.apply(s);
                for &x in &dom {
                    values.push(add(map.get(x).unwrap(), &ts));
                    tags.push((x, s.clone()));
                }
            }
            let set = FiniteValueSet::new(&inst.k_cone, values)?;
            let group = points.last().map_or(0, |p: &DualPoint| p.group + 1);
            for i in set.wmin_indices() {
                let (x, s) = tags[i].clone();
                let cert = DualPointCertificate::Operator { scenario: u, op: t.clone(), s };
                points.push(DualPoint { value: set.points()[i].clone(), x, group, certificate: cert });
            }
        }
    }
    finish(inst, Variant::RvdW, l, points, tgrid.len(), true, discarded)
}

/// Recomputes a dual point from its certificate.
pub fn reconstruct(inst: &RobustInstance, l: &LinearOperator, p: &DualPoint) -> Result<Vec<f64>> {
    let obj = perturbed_objective(inst, l)?;
    let fx = obj.get(p.x).ok_or(Error::Invalid("certificate point outside dom F".into()))?.to_vec();
    match &p.certificate {
        DualPointCertificate::Multiplier { scenario, zstar } => {
            let map = composite_k(&obj, &inst.c_mask, zstar, &inst.scenarios[*scenario].g, inst.k())?;
            map.get(p.x).map(<[f64]>::to_vec).ok_or(Error::Invalid("certificate point outside the composite domain".into()))
        }
        DualPointCertificate::Operator { scenario, op, s } => {
            let map = composite_t(&obj, &inst.c_mask, op, &inst.scenarios[*scenario].g)?;
            let base = map.get(p.x).map(<[f64]>::to_vec).ok_or(Error::Invalid("certificate point outside the composite domain".into()))?;
            let _ = fx;
            Ok(add(&base, &op.apply(s)))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub primal: PrimalReport,
    pub dual: DualReport,
    /// `(dual point, primal value)` positions with `d − p ∈ int K`.
    pub weak_violations: Vec<(usize, usize)>,
    pub pairs_checked: usize,
    /// For each dual weak maximum, whether it lies in the primal weak infimum.
    pub dual_in_primal_winf: Vec<bool>,
    /// For each primal weak minimum, `min_d maxᵢ aᵢ·(p − d)/aᵢ·k`.
    pub primal_gaps: Vec<f64>,
    pub tolerance: f64,
}

impl DualityReport {
    pub fn weak_holds(&self) -> bool {
        self.weak_violations.is_empty()
    }

    pub fn exact_direction_holds(&self) -> bool {
        self.dual_in_primal_winf.iter().all(|b| *b)
    }

    pub fn max_gap(&self) -> f64 {
        self.primal_gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn approximate_direction_holds(&self) -> bool {
        self.max_gap() <= self.tolerance
    }

    pub fn strong_holds(&self) -> bool {
        self.weak_holds() && self.exact_direction_holds() && self.approximate_direction_holds()
    }
}

pub fn verify_duality(inst: &RobustInstance, primal: &PrimalReport, dual: &DualReport, tol: f64) -> Result<DualityReport> {
    let k = &inst.k_cone;
    let mut weak_violations = Vec::new();
    for (di, d) in dual.points.iter().enumerate() {
        for (pi, p) in primal.values.iter().enumerate() {
            if k.strictly_dominates(&d.value, p) {
                weak_violations.push((di, pi));
            }
        }
    }
    let pairs_checked = dual.points.len() * primal.values.len();
    let pset = primal.value_set(k)?;
    let dual_in_primal_winf = dual.wmax.iter().map(|&i| pset.winf_contains(&dual.points[i].value)).collect::<std::result::Result<Vec<_>, _>>()?;
    let primal_gaps = primal
        .wmin
        .iter()
        .map(|&i| {
            dual.points
                .iter()
                .map(|d| directional_offset(k, &primal.values[i], &d.value, inst.k()))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    Ok(DualityReport { primal: primal.clone(), dual: dual.clone(), weak_violations, pairs_checked, dual_in_primal_winf, primal_gaps, tolerance: tol })
}

/// Grids shared by the vector dual solvers.
#[derive(Debug, Clone)]
pub struct DualGrids {
    pub zgrid: Vec<DualVector>,
    pub tgrid: Vec<LinearOperator>,
    pub s_samples: Vec<Vec<f64>>,
}

impl DualGrids {
    /// `z*` grid at `resolution`, its rank-one lifts plus `extra` operators,
    /// and the generator ladder of `S`.
    pub fn from_instance(inst: &RobustInstance, resolution: usize, extra: &[LinearOperator]) -> Self {
        let zgrid = crate::cones::sample_dual_cone(&inst.s_cone, resolution);
        let tgrid = inst.operator_grid(resolution, extra);
        DualGrids { zgrid, tgrid, s_samples: s_ladder(&inst.s_cone) }
    }

    /// Grids recorded in an instance file, refinement included.
    pub fn from_loaded(li: &LoadedInstance) -> Result<Self> {
        let mut grids = DualGrids::from_instance(&li.instance, li.dual_resolution, &li.extra_operators);
        if let Some(r) = li.refine {
            grids.refine(&li.instance, li.dual_resolution, r.step, r.count)?;
        }
        Ok(grids)
    }

    /// Appends `j·step·d`, `j = 1..=count`, for each grid direction `d` of
    /// `S⁺`, together with their rank-one lifts.
    pub fn refine(&mut self, inst: &RobustInstance, resolution: usize, step: f64, count: usize) -> Result<()> {
        for d in dual_cone_directions(&inst.s_cone, resolution) {
            for j in 1..=count {
                let z: Vec<f64> = d.iter().map(|v| v * step * j as f64).collect();
                if self.zgrid.iter().any(|w| w.as_slice() == z.as_slice()) {
                    continue;
                }
                let z = DualVector::new(&inst.s_cone, z)?;
                self.tgrid.push(LinearOperator::rank_one(inst.k(), &z));
                self.zgrid.push(z);
            }
        }
        Ok(())
    }
}

pub fn solve_dual(inst: &RobustInstance, l: &LinearOperator, variant: Variant, grids: &DualGrids) -> Result<DualReport> {
    match variant {
        Variant::RvdK => solve_dual_k(inst, l, &grids.zgrid),
        Variant::Rvd => solve_dual_t(inst, l, &grids.tgrid),
        Variant::RvdW => solve_dual_weak(inst, l, &grids.tgrid, &grids.s_samples),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub perturbations: usize,
    pub weak_failures: usize,
    pub strong_failures: usize,
    pub flagged_unbounded: usize,
    pub max_gap: f64,
}

pub fn stable_sweep(
    inst: &RobustInstance,
    perturbations: &[LinearOperator],
    variant: Variant,
    grids: &DualGrids,
    tol: f64,
) -> Result<(Vec<DualityReport>, SweepSummary)> {
    let mut reports = Vec::new();
    for l in perturbations {
        let primal = solve_primal(inst, l)?;
        let dual = solve_dual(inst, l, variant, grids)?;
        reports.push(verify_duality(inst, &primal, &dual, tol)?);
    }
    let summary = SweepSummary {
        perturbations: reports.len(),
        weak_failures: reports.iter().filter(|r| !r.weak_holds()).count(),
        strong_failures: reports.iter().filter(|r| !r.strong_holds()).count(),
        flagged_unbounded: reports.iter().filter(|r| r.primal.possibly_unbounded).count(),
        max_gap: reports.iter().map(DualityReport::max_gap).fold(f64::NEG_INFINITY, f64::max),
    };
    Ok((reports, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::{sample_dual_cone, Direction};
    use crate::conjugate::GroundSet;
    use crate::farkas::{Declarations, Scenario};

    fn robust_lp() -> RobustInstance {
        let ground = GroundSet::interval(0.0, 10.0, 101).unwrap();
        let f = VectorMap::from_fn(&ground, 1, |x| vec![x[0]]).unwrap();
        let scenarios = [1.0, 2.0]
            .iter()
            .map(|&u| Scenario { label: format!("{u}"), param: vec![u], g: VectorMap::from_fn(&ground, 1, |x| vec![1.0 - u * x[0]]).unwrap() })
            .collect();
        let k = PolyhedralCone::orthant(1);
        let dir = Direction::new(&k, vec![1.0]).unwrap();
        RobustInstance::new(ground, vec![true; 101], f, k, PolyhedralCone::orthant(1), scenarios, dir, Declarations::default()).unwrap()
    }

    fn zero_l(inst: &RobustInstance) -> LinearOperator {
        LinearOperator::zeros(inst.m(), inst.n())
    }

    #[test]
    fn primal_of_robust_lp() {
        let inst = robust_lp();
        let p = solve_primal(&inst, &zero_l(&inst)).unwrap();
        assert_eq!(p.wmin_values(), vec![vec![1.0]]);
        assert!(!p.possibly_unbounded);
        let flat = solve_primal(&inst, &LinearOperator::new(1, 1, vec![1.0]).unwrap()).unwrap();
        assert!(flat.values.iter().all(|v| v[0].abs() < 1e-12));
        let down = solve_primal(&inst, &LinearOperator::new(1, 1, vec![2.0]).unwrap()).unwrap();
        assert!(down.possibly_unbounded);
    }

    #[test]
    fn dual_k_of_robust_lp() {
        let inst = robust_lp();
        let l = zero_l(&inst);
        let zgrid = sample_dual_cone(&inst.s_cone, 3);
        let d = solve_dual_k(&inst, &l, &zgrid).unwrap();
        assert_eq!(d.wmax_distinct(), vec![vec![1.0]]);
        match &d.points[d.wmax[0]].certificate {
            DualPointCertificate::Multiplier { scenario, zstar } => assert_eq!((*scenario, zstar[0]), (0, 1.0)),
            c => panic!("{c:?}"),
        }
        let report = verify_duality(&inst, &solve_primal(&inst, &l).unwrap(), &d, 1e-6).unwrap();
        assert!(report.strong_holds());
        assert_eq!(report.max_gap(), 0.0);
        assert_eq!(solve_dual_k(&inst, &l, &[]).unwrap_err(), Error::GridWithoutZero);
    }

    #[test]
    fn under_resolved_dual_keeps_weak_duality() {
        let inst = robust_lp();
        let l = zero_l(&inst);
        let d = solve_dual_k(&inst, &l, &[DualVector::zero(1)]).unwrap();
        let report = verify_duality(&inst, &solve_primal(&inst, &l).unwrap(), &d, 1e-6).unwrap();
        assert!(report.weak_holds());
        assert!(!report.approximate_direction_holds());
    }

    #[test]
    fn operator_duals_agree_with_multiplier_dual() {
        let inst = robust_lp();
        let l = LinearOperator::new(1, 1, vec![0.5]).unwrap();
        let grids = DualGrids::from_instance(&inst, 3, &[]);
        let dk = solve_dual_k(&inst, &l, &grids.zgrid).unwrap();
        let dt = solve_dual_t(&inst, &l, &grids.tgrid).unwrap();
        let dw = solve_dual_weak(&inst, &l, &grids.tgrid, &[vec![0.0]]).unwrap();
        assert_eq!(dk.wmax_distinct(), dt.wmax_distinct());
        assert_eq!(dt.wmax_distinct(), dw.wmax_distinct());
        assert!(dw.heuristic);
        for p in dk.points.iter().chain(&dt.points).chain(&dw.points) {
            assert_eq!(reconstruct(&inst, &l, p).unwrap(), p.value);
        }
    }

    #[test]
    fn weak_dual_discards_ray_into_negative_interior() {
        let inst = robust_lp();
        let l = zero_l(&inst);
        let bad = LinearOperator::new(1, 1, vec![-1.0]).unwrap();
        let d = solve_dual_weak(&inst, &l, &[LinearOperator::zeros(1, 1), bad], &s_ladder(&inst.s_cone)).unwrap();
        assert_eq!(d.discarded.len(), 1);
        assert!(d.discarded[0].reason.contains("unbounded"));
    }

    #[test]
    fn enlarging_the_grid_keeps_attained_points() {
        let inst = robust_lp();
        let l = zero_l(&inst);
        let small = solve_dual_k(&inst, &l, &sample_dual_cone(&inst.s_cone, 1)).unwrap();
        let big = solve_dual_k(&inst, &l, &sample_dual_cone(&inst.s_cone, 3)).unwrap();
        for p in &small.points {
            assert!(big.points.iter().any(|q| q.value == p.value));
        }
        let best = |r: &DualReport| r.wmax_values().iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
        assert!(best(&big) >= best(&small));
    }

    #[test]
    fn sweep_flags_but_survives_descent() {
        let inst = robust_lp();
        let grids = DualGrids::from_instance(&inst, 3, &[]);
        let v = vec![zero_l(&inst), LinearOperator::new(1, 1, vec![3.0]).unwrap()];
        let (reports, summary) = stable_sweep(&inst, &v, Variant::RvdK, &grids, 1e-6).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(summary.flagged_unbounded, 1);
        assert_eq!(summary.weak_failures, 0);
        assert!(reports[0].strong_holds());
    }
}
