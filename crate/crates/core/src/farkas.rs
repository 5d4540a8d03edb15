//! Robust instances, qualifying sets and the four Farkas-type statements.
//!
//! With `ᾱ_x = threshold(y − L(x) + F(x))` along `k`, the statement
//! `F(x) + ⟨z*, G_u(x)⟩k − L(x) + y ∉ −int K` is the scalar inequality
//! `⟨z*, G_u(x)⟩ ≥ ᾱ_x`, so the multiplier search for `A_k` is a single LP
//! per scenario. The operator statements are searched on grids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cones::{sample_dual_cone, Direction, DualVector, PolyhedralCone, MAGNITUDE_LADDER};
use crate::conjugate::{EpiPoint, ExtValue, GroundSet, LinearOperator, VectorMap};
use crate::error::{Error, Result};
use crate::linalg::{add, axpy, dot, neg, sub};
use crate::lp::{lp_solve, Bound, LpProblem, LpSolution, Relation};

/// Cap on the multipliers of the `−T(S) − int K` membership LP.
pub const MU_CAP: f64 = 1e6;
/// Slack applied to LP rows encoding a strict inequality.
pub const LP_STRICT: f64 = 1e-7;

#[derive(Debug, Clone, Serialize)]
pub struct Scenario {
    pub label: String,
    pub param: Vec<f64>,
    pub g: VectorMap,
}

/// `G_u(x) = base(x) + Σ_l u_l · slopes_l(x)`, affine and hence concave in `u`.
#[derive(Debug, Clone, Serialize)]
pub struct AffineFamily {
    pub base: VectorMap,
    pub slopes: Vec<VectorMap>,
}

impl AffineFamily {
    pub fn new(base: VectorMap, slopes: Vec<VectorMap>) -> Result<Self> {
        for s in &slopes {
            if s.dim() != base.dim() || s.len() != base.len() {
                return Err(Error::Invalid("affine family slopes must match the base map shape".into()));
            }
        }
        Ok(AffineFamily { base, slopes })
    }

    pub fn param_dim(&self) -> usize {
        self.slopes.len()
    }

    pub fn eval(&self, u: &[f64]) -> Result<VectorMap> {
        if u.len() != self.slopes.len() {
            return Err(Error::Dimension { what: "family parameter", expected: self.slopes.len(), found: u.len() });
        }
        let values = (0..self.base.len())
            .map(|i| {
                let mut v = match self.base.get(i) {
                    Some(b) => b.to_vec(),
                    None => return ExtValue::PlusInf,
                };
                for (ul, s) in u.iter().zip(&self.slopes) {
                    match s.get(i) {
                        Some(si) => v = axpy(&v, *ul, si),
                        None => return ExtValue::PlusInf,
                    }
                }
                ExtValue::Finite(v)
            })
            .collect();
        VectorMap::new(self.base.dim(), values)
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Declarations {
    pub convex_regime: bool,
    pub compact_u: bool,
    pub concave_in_u: Option<AffineFamily>,
}

/// Data of the robust vector problem `wmin{F(x) : x ∈ C, G_u(x) ∈ −S ∀u}`.
#[derive(Debug, Clone, Serialize)]
pub struct RobustInstance {
    pub ground: GroundSet,
    pub c_mask: Vec<bool>,
    pub f: VectorMap,
    pub k_cone: PolyhedralCone,
    pub s_cone: PolyhedralCone,
    pub scenarios: Vec<Scenario>,
    pub direction: Direction,
    pub declarations: Declarations,
}

impl RobustInstance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ground: GroundSet,
        c_mask: Vec<bool>,
        f: VectorMap,
        k_cone: PolyhedralCone,
        s_cone: PolyhedralCone,
        scenarios: Vec<Scenario>,
        direction: Direction,
        declarations: Declarations,
    ) -> Result<Self> {
        let n = ground.len();
        if c_mask.len() != n {
            return Err(Error::Dimension { what: "constraint mask", expected: n, found: c_mask.len() });
        }
        if f.len() != n || f.dim() != k_cone.dim() {
            return Err(Error::Dimension { what: "objective map", expected: k_cone.dim(), found: f.dim() });
        }
        if direction.len() != k_cone.dim() {
            return Err(Error::Dimension { what: "direction", expected: k_cone.dim(), found: direction.len() });
        }
        if scenarios.is_empty() {
            return Err(Error::NoScenarios);
        }
        for s in &scenarios {
            if s.g.len() != n || s.g.dim() != s_cone.dim() {
                return Err(Error::Dimension { what: "scenario map", expected: s_cone.dim(), found: s.g.dim() });
            }
        }
        if let Some(fam) = &declarations.concave_in_u {
            if fam.base.len() != n || fam.base.dim() != s_cone.dim() {
                return Err(Error::Invalid("declared family does not match the constraint shape".into()));
            }
            for s in &scenarios {
                let want = fam.eval(&s.param)?;
                let agree = want.values().iter().zip(s.g.values()).all(|(a, b)| match (a, b) {
                    (ExtValue::Finite(a), ExtValue::Finite(b)) => a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9),
                    (ExtValue::PlusInf, ExtValue::PlusInf) => true,
                    _ => false,
                });
                if !agree {
                    return Err(Error::Invalid(format!("scenario {} disagrees with the declared family", s.label)));
                }
            }
        }
        let inst = RobustInstance { ground, c_mask, f, k_cone, s_cone, scenarios, direction, declarations };
        if !inst.feasible_set().iter().any(|&i| inst.f.get(i).is_some()) {
            return Err(Error::EmptyFeasibleSet);
        }
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.ground.dim()
    }

    pub fn m(&self) -> usize {
        self.k_cone.dim()
    }

    pub fn p(&self) -> usize {
        self.s_cone.dim()
    }

    pub fn k(&self) -> &[f64] {
        &self.direction
    }

    /// `G_u(x) ∈ −S`; `+∞` never is.
    pub fn satisfies(&self, u: usize, x: usize) -> bool {
        match self.scenarios[u].g.get(x) {
            Some(g) => self.s_cone.contains(&neg(g)),
            None => false,
        }
    }

    /// Indices of `A = {x ∈ C : G_u(x) ∈ −S ∀u}`.
    pub fn feasible_set(&self) -> Vec<usize> {
        (0..self.ground.len())
            .filter(|&x| self.c_mask[x] && (0..self.scenarios.len()).all(|u| self.satisfies(u, x)))
            .collect()
    }

    /// Indices of `C ∩ dom F`.
    pub fn c_dom(&self) -> Vec<usize> {
        (0..self.ground.len()).filter(|&x| self.c_mask[x] && self.f.get(x).is_some()).collect()
    }

    /// `y − L(x) + F(x)` for `x ∈ dom F`.
    pub fn residual(&self, p: &EpiPoint, x: usize) -> Vec<f64> {
        add(&sub(&p.y, &p.op.apply(self.ground.point(x))), self.f.get(x).expect("x in dom F"))
    }

    fn check_probe(&self, p: &EpiPoint) -> Result<()> {
        if p.op.rows() != self.m() || p.op.cols() != self.n() || p.y.len() != self.m() {
            return Err(Error::Dimension { what: "probe", expected: self.m(), found: p.y.len() });
        }
        Ok(())
    }

    /// Rank-one lifts `k·z*` of a dual-cone grid, followed by `extra`.
    pub fn operator_grid(&self, resolution: usize, extra: &[LinearOperator]) -> Vec<LinearOperator> {
        let mut grid: Vec<LinearOperator> =
            sample_dual_cone(&self.s_cone, resolution).iter().map(|z| LinearOperator::rank_one(self.k(), z)).collect();
        grid.extend(extra.iter().cloned());
        grid
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualCertificate {
    pub scenario: usize,
    pub label: String,
    pub zstar: DualVector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorCertificate {
    pub scenario: usize,
    pub label: String,
    pub op: LinearOperator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StatementResult {
    True,
    False,
    CertifiedTrue,
    NotFoundUnderGrid,
    Unknown,
}

impl StatementResult {
    pub fn holds(self) -> bool {
        matches!(self, StatementResult::True | StatementResult::CertifiedTrue)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SearchOutcome {
    Found(OperatorCertificate),
    NotFoundUnderGrid,
    Unknown,
}

impl SearchOutcome {
    pub fn result(&self) -> StatementResult {
        match self {
            SearchOutcome::Found(_) => StatementResult::CertifiedTrue,
            SearchOutcome::NotFoundUnderGrid => StatementResult::NotFoundUnderGrid,
            SearchOutcome::Unknown => StatementResult::Unknown,
        }
    }

    pub fn certificate(&self) -> Option<&OperatorCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// (α): `y − L(x) + F(x) ∉ −int K` for every `x ∈ A ∩ dom F`.
pub fn statement_alpha(inst: &RobustInstance, p: &EpiPoint) -> Result<bool> {
    inst.check_probe(p)?;
    Ok(inst
        .feasible_set()
        .into_iter()
        .filter(|&x| inst.f.get(x).is_some())
        .all(|x| !inst.k_cone.in_neg_interior(&inst.residual(p, x))))
}

/// Direct evaluation of (δ) for a given `(u, z*)`.
pub fn delta_holds(inst: &RobustInstance, p: &EpiPoint, u: usize, z: &[f64]) -> bool {
    inst.c_dom().into_iter().all(|x| match inst.scenarios[u].g.get(x) {
        Some(g) => !inst.k_cone.in_neg_interior(&axpy(&inst.residual(p, x), dot(z, g), inst.k())),
        None => true,
    })
}

/// Rows `(G_u(x), ᾱ_x)` of the (δ) reduction for scenario `u`.
pub fn delta_rows(inst: &RobustInstance, p: &EpiPoint, u: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    let mut rows = Vec::new();
    for x in inst.c_dom() {
        if let Some(g) = inst.scenarios[u].g.get(x) {
            let alpha = inst.k_cone.threshold_alpha(&inst.residual(p, x), inst.k())?;
            rows.push((g.to_vec(), alpha));
        }
    }
    Ok(rows)
}

/// Smallest-norm-like `z* ∈ S⁺` with `⟨z*, g⟩ ≥ ᾱ` on every row, if any.
fn multiplier_lp(s: &PolyhedralCone, rows: &[(Vec<f64>, f64)]) -> Result<Option<Vec<f64>>> {
    let p = s.dim();
    let mut obj = vec![0.0; p];
    for g in s.generators() {
        for (o, gi) in obj.iter_mut().zip(g) {
            *o += gi;
        }
    }
    let mut lp = LpProblem::minimize(obj);
    for g in s.generators() {
        lp.constrain(g.clone(), Relation::Ge, 0.0);
    }
    for (g, alpha) in rows {
        lp.constrain(g.clone(), Relation::Ge, *alpha);
    }
    Ok(match lp_solve(&lp)? {
        LpSolution::Optimal { point, .. } => Some(point.into_iter().map(|v| if v.abs() < 1e-12 { 0.0 } else { v }).collect()),
        _ => None,
    })
}

/// (δ): exact LP certificate `(u, z*)`, re-verified by direct evaluation.
pub fn statement_delta_certify(inst: &RobustInstance, p: &EpiPoint) -> Result<Option<DualCertificate>> {
    inst.check_probe(p)?;
    for u in 0..inst.scenarios.len() {
        let rows = delta_rows(inst, p, u)?;
        if let Some(z) = multiplier_lp(&inst.s_cone, &rows)? {
            if !delta_holds(inst, p, u, &z) {
                return Err(Error::CertificateRejected(format!("(delta) fails for scenario {} with z* = {:?}", inst.scenarios[u].label, z)));
            }
            let zstar = DualVector::new(&inst.s_cone, z)?;
            return Ok(Some(DualCertificate { scenario: u, label: inst.scenarios[u].label.clone(), zstar }));
        }
    }
    Ok(None)
}

/// `T ∈ L₊(S, K)`: every generator of `S` maps into `K`.
pub fn is_positive_operator(t: &LinearOperator, s: &PolyhedralCone, k: &PolyhedralCone) -> bool {
    s.generators().iter().all(|g| k.contains(&t.apply(g)))
}

/// `T ∈ L₊ʷ(S, K)`: no element of `T(S)` lies in `−int K`.
pub fn is_weak_positive_operator(t: &LinearOperator, s: &PolyhedralCone, k: &PolyhedralCone) -> Result<bool> {
    let images: Vec<Vec<f64>> = s.generators().iter().map(|g| t.apply(g)).collect();
    let mut lp = LpProblem::maximize(vec![0.0; images.len()]);
    lp.all_nonnegative();
    for a in k.normals() {
        lp.constrain(images.iter().map(|img| dot(a, img)).collect(), Relation::Le, -1.0);
    }
    Ok(!lp_solve(&lp)?.is_optimal())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    Unknown,
}

/// `w ∈ −T(S) − int K`, via `∃μ ≥ 0: aᵢ·(w + Σⱼ μⱼ T gⱼ) ≤ −ε` with and
/// without the cap [`MU_CAP`].
pub fn in_shifted_image(w: &[f64], t: &LinearOperator, s: &PolyhedralCone, k: &PolyhedralCone) -> Result<Membership> {
    let images: Vec<Vec<f64>> = s.generators().iter().map(|g| t.apply(g)).collect();
    let solve = |cap: Option<f64>| -> Result<bool> {
        let mut lp = LpProblem::maximize(vec![0.0; images.len()]);
        for j in 0..images.len() {
            lp.bound(j, Bound { lower: Some(0.0), upper: cap });
        }
        for a in k.normals() {
            lp.constrain(images.iter().map(|img| dot(a, img)).collect(), Relation::Le, -LP_STRICT - dot(a, w));
        }
        Ok(lp_solve(&lp)?.is_optimal())
    };
    if solve(Some(MU_CAP))? {
        return Ok(Membership::In);
    }
    Ok(if solve(None)? { Membership::Unknown } else { Membership::Out })
}

/// `F(x) + T(G_u(x)) − L(x) + y ∉ −int K` for every `x ∈ C ∩ dom F`.
pub fn beta_holds(inst: &RobustInstance, p: &EpiPoint, u: usize, t: &LinearOperator) -> bool {
    inst.c_dom().into_iter().all(|x| match inst.scenarios[u].g.get(x) {
        Some(g) => !inst.k_cone.in_neg_interior(&add(&inst.residual(p, x), &t.apply(g))),
        None => true,
    })
}

/// (β) on a grid of operators; grid entries outside `L₊(S, K)` are skipped.
pub fn statement_beta_search(inst: &RobustInstance, p: &EpiPoint, tgrid: &[LinearOperator]) -> Result<SearchOutcome> {
    inst.check_probe(p)?;
    for t in tgrid.iter().filter(|t| is_positive_operator(t, &inst.s_cone, &inst.k_cone)) {
        for u in 0..inst.scenarios.len() {
            if beta_holds(inst, p, u, t) {
                return Ok(SearchOutcome::Found(OperatorCertificate { scenario: u, label: inst.scenarios[u].label.clone(), op: t.clone() }));
            }
        }
    }
    Ok(SearchOutcome::NotFoundUnderGrid)
}

/// Direct evaluation of (γ) for `(u, T)`.
pub fn gamma_check(inst: &RobustInstance, p: &EpiPoint, u: usize, t: &LinearOperator) -> Result<Membership> {
    let mut unknown = false;
    for x in inst.c_dom() {
        if let Some(g) = inst.scenarios[u].g.get(x) {
            let w = add(&inst.residual(p, x), &t.apply(g));
            match in_shifted_image(&w, t, &inst.s_cone, &inst.k_cone)? {
                Membership::In => return Ok(Membership::Out),
                Membership::Unknown => unknown = true,
                Membership::Out => {}
            }
        }
    }
    Ok(if unknown { Membership::Unknown } else { Membership::In })
}

/// (γ) on a grid of operators filtered to `L₊ʷ(S, K)`.
pub fn statement_gamma_search(inst: &RobustInstance, p: &EpiPoint, tgrid: &[LinearOperator]) -> Result<SearchOutcome> {
    inst.check_probe(p)?;
    let mut unknown = false;
    for t in tgrid {
        if !is_weak_positive_operator(t, &inst.s_cone, &inst.k_cone)? {
            continue;
        }
        for u in 0..inst.scenarios.len() {
            match gamma_check(inst, p, u, t)? {
                Membership::In => {
                    return Ok(SearchOutcome::Found(OperatorCertificate { scenario: u, label: inst.scenarios[u].label.clone(), op: t.clone() }))
                }
                Membership::Unknown => unknown = true,
                Membership::Out => {}
            }
        }
    }
    Ok(if unknown { SearchOutcome::Unknown } else { SearchOutcome::NotFoundUnderGrid })
}

/// Sampled points of `I*_{−S}(T) = wsup(−T(S))`: the origin and the ladder
/// points `−t·T(g)` that are not strictly dominated inside `−T(S)`.
pub fn indicator_conjugate_samples(t: &LinearOperator, s: &PolyhedralCone, k: &PolyhedralCone) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    let mut candidates = vec![vec![0.0; k.dim()]];
    for g in s.generators() {
        let tg = t.apply(g);
        for scale in MAGNITUDE_LADDER {
            candidates.push(tg.iter().map(|v| -scale * v).collect());
        }
    }
    for v in candidates {
        if in_shifted_image(&v, t, s, k)? == Membership::Out && !out.contains(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QualifyingSet {
    Ak,
    Agrid,
    Bgrid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum QualifyingWitness {
    Multiplier(DualCertificate),
    Operator(OperatorCertificate),
}

/// Membership in `A_k` (exact), or in `A` / `B` (grid search).
pub fn qualifying_set_contains(
    inst: &RobustInstance,
    which: QualifyingSet,
    p: &EpiPoint,
    tgrid: &[LinearOperator],
) -> Result<(StatementResult, Option<QualifyingWitness>)> {
    match which {
        QualifyingSet::Ak => Ok(match statement_delta_certify(inst, p)? {
            Some(c) => (StatementResult::CertifiedTrue, Some(QualifyingWitness::Multiplier(c))),
            None => (StatementResult::False, None),
        }),
        QualifyingSet::Agrid => {
            let out = statement_beta_search(inst, p, tgrid)?;
            Ok((out.result(), out.certificate().cloned().map(QualifyingWitness::Operator)))
        }
        QualifyingSet::Bgrid => {
            inst.check_probe(p)?;
            for t in tgrid {
                if !is_weak_positive_operator(t, &inst.s_cone, &inst.k_cone)? {
                    continue;
                }
                let vs = indicator_conjugate_samples(t, &inst.s_cone, &inst.k_cone)?;
                for u in 0..inst.scenarios.len() {
                    let all = vs.iter().all(|v| {
                        let shifted = EpiPoint { op: p.op.clone(), y: sub(&p.y, v) };
                        beta_holds(inst, &shifted, u, t)
                    });
                    if all {
                        let cert = OperatorCertificate { scenario: u, label: inst.scenarios[u].label.clone(), op: t.clone() };
                        return Ok((StatementResult::CertifiedTrue, Some(QualifyingWitness::Operator(cert))));
                    }
                }
            }
            Ok((StatementResult::NotFoundUnderGrid, None))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FarkasVerdict {
    pub probe: EpiPoint,
    pub alpha: StatementResult,
    pub beta: StatementResult,
    pub gamma: StatementResult,
    pub delta: StatementResult,
    pub delta_certificate: Option<DualCertificate>,
    pub beta_certificate: Option<OperatorCertificate>,
    pub gamma_certificate: Option<OperatorCertificate>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct FarkasSummary {
    pub probes: usize,
    /// (α) and (δ) agree.
    pub alpha_delta_agree: usize,
    /// (δ) certified while (α) fails; any nonzero count is a defect.
    pub delta_without_alpha: usize,
    /// (α) holds with no (δ) certificate.
    pub alpha_without_delta: usize,
    pub beta_not_found: usize,
    pub gamma_not_found: usize,
    pub unknown: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FarkasReport {
    pub rows: Vec<FarkasVerdict>,
    pub summary: FarkasSummary,
}

pub fn farkas_equivalence_report(inst: &RobustInstance, probes: &[EpiPoint], tgrid: &[LinearOperator]) -> Result<FarkasReport> {
    let mut rows = Vec::new();
    let mut summary = FarkasSummary { probes: probes.len(), ..Default::default() };
    for p in probes {
        let alpha = statement_alpha(inst, p)?;
        let delta_certificate = statement_delta_certify(inst, p)?;
        let beta = statement_beta_search(inst, p, tgrid)?;
        let gamma = statement_gamma_search(inst, p, tgrid)?;
        let delta = delta_certificate.is_some();
        if alpha == delta {
            summary.alpha_delta_agree += 1;
        } else if delta {
            summary.delta_without_alpha += 1;
        } else {
            summary.alpha_without_delta += 1;
        }
        if beta == SearchOutcome::NotFoundUnderGrid {
            summary.beta_not_found += 1;
        }
        match gamma {
            SearchOutcome::NotFoundUnderGrid => summary.gamma_not_found += 1,
            SearchOutcome::Unknown => summary.unknown += 1,
            SearchOutcome::Found(_) => {}
        }
        rows.push(FarkasVerdict {
            probe: p.clone(),
            alpha: if alpha { StatementResult::True } else { StatementResult::False },
            beta: beta.result(),
            gamma: gamma.result(),
            delta: if delta { StatementResult::CertifiedTrue } else { StatementResult::False },
            delta_certificate,
            beta_certificate: beta.certificate().cloned(),
            gamma_certificate: gamma.certificate().cloned(),
        });
    }
    Ok(FarkasReport { rows, summary })
}

/// Least `r` with `(L + k·x*ᵀ, y + r·k) ∈ A_k`, minimized over scenarios.
pub fn qualifying_section_floor(inst: &RobustInstance, base: &EpiPoint, xstar: &[f64]) -> Result<f64> {
    inst.check_probe(base)?;
    let mut best = f64::INFINITY;
    for u in 0..inst.scenarios.len() {
        let p = inst.p();
        let mut obj = vec![0.0; p + 1];
        obj[p] = 1.0;
        let mut lp = LpProblem::minimize(obj);
        for g in inst.s_cone.generators() {
            let mut row = g.clone();
            row.push(0.0);
            lp.constrain(row, Relation::Ge, 0.0);
        }
        for x in inst.c_dom() {
            if let Some(g) = inst.scenarios[u].g.get(x) {
                let alpha = inst.k_cone.threshold_alpha(&inst.residual(base, x), inst.k())?;
                let mut row = g.to_vec();
                row.push(1.0);
                lp.constrain(row, Relation::Ge, alpha + dot(xstar, inst.ground.point(x)));
            }
        }
        match lp_solve(&lp)? {
            LpSolution::Optimal { value, .. } => best = best.min(value),
            LpSolution::Unbounded => return Ok(f64::NEG_INFINITY),
            LpSolution::Infeasible => {}
        }
    }
    Ok(best)
}

/// A pair `((z*₁, u₁), (z*₂, u₂))` for the uniform concavity check.
pub type H1Pair = ((Vec<f64>, usize), (Vec<f64>, usize));

#[derive(Debug, Clone, Serialize)]
pub enum H1Witness {
    /// Scenario from the finite list.
    Listed { zstar: Vec<f64>, scenario: usize },
    /// Parameter built from the declared affine family.
    Constructed { zstar: Vec<f64>, param: Vec<f64> },
}

#[derive(Debug, Clone, Serialize)]
pub enum H1Verdict {
    Pass { checked: usize, witnesses: Vec<H1Witness> },
    Fail { pair: H1Pair },
}

impl H1Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, H1Verdict::Pass { .. })
    }
}

/// Deterministic random pairs drawn from `zgrid × scenarios`.
pub fn h1_pairs(inst: &RobustInstance, zgrid: &[DualVector], count: usize, seed: u64) -> Vec<H1Pair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nu = inst.scenarios.len();
    (0..count)
        .map(|_| {
            let a = (zgrid[rng.gen_range(0..zgrid.len())].to_vec(), rng.gen_range(0..nu));
            let b = (zgrid[rng.gen_range(0..zgrid.len())].to_vec(), rng.gen_range(0..nu));
            (a, b)
        })
        .collect()
}

/// Checks `⟨z*₁, G_{u₁}(x)⟩ + ⟨z*₂, G_{u₂}(x)⟩ ≤ ⟨z*, G_u(x)⟩` on `C ∩ dom F`
/// for some `(z*, u)`. A declared scalar affine family yields the witness
/// `λ = λ₁ + λ₂`, `u = (λ₁u₁ + λ₂u₂)/λ`; otherwise an LP over `z* ∈ S⁺` is
/// solved for each listed scenario.
pub fn check_h1(inst: &RobustInstance, pairs: &[H1Pair]) -> Result<H1Verdict> {
    let xs = inst.c_dom();
    let combined = |pair: &H1Pair, x: usize| -> Option<f64> {
        let ((z1, u1), (z2, u2)) = pair;
        Some(dot(z1, inst.scenarios[*u1].g.get(x)?) + dot(z2, inst.scenarios[*u2].g.get(x)?))
    };
    let mut witnesses = Vec::new();
    for pair in pairs {
        let ((z1, u1), (z2, u2)) = pair;
        if let (Some(fam), 1) = (&inst.declarations.concave_in_u, inst.p()) {
            let (l1, l2) = (z1[0], z2[0]);
            let lam = l1 + l2;
            let param = if lam > 0.0 {
                axpy(&crate::linalg::scale(&inst.scenarios[*u1].param, l1 / lam), l2 / lam, &inst.scenarios[*u2].param)
            } else {
                inst.scenarios[*u1].param.clone()
            };
            let g = fam.eval(&param)?;
            let ok = xs.iter().all(|&x| match (combined(pair, x), g.get(x)) {
                (Some(lhs), Some(gx)) => lhs <= lam * gx[0] + 1e-9 * (1.0 + lhs.abs()),
                (None, _) | (_, None) => true,
            });
            if !ok {
                return Ok(H1Verdict::Fail { pair: pair.clone() });
            }
            witnesses.push(H1Witness::Constructed { zstar: vec![lam], param });
            continue;
        }
        let mut found = None;
        for u in 0..inst.scenarios.len() {
            let rows: Vec<(Vec<f64>, f64)> = xs
                .iter()
                .filter_map(|&x| Some((inst.scenarios[u].g.get(x)?.to_vec(), combined(pair, x)?)))
                .collect();
            if let Some(z) = multiplier_lp(&inst.s_cone, &rows)? {
                found = Some(H1Witness::Listed { zstar: z, scenario: u });
                break;
            }
        }
        match found {
            Some(w) => witnesses.push(w),
            None => return Ok(H1Verdict::Fail { pair: pair.clone() }),
        }
    }
    Ok(H1Verdict::Pass { checked: pairs.len(), witnesses })
}

#[derive(Debug, Clone, Serialize)]
pub struct SlaterReport {
    /// Per scenario, the first `x ∈ C ∩ dom F` with `G_u(x) ∈ −int S`.
    pub witnesses: Vec<Option<usize>>,
}

impl SlaterReport {
    pub fn holds(&self) -> bool {
        self.witnesses.iter().all(Option::is_some)
    }
}

pub fn check_slater(inst: &RobustInstance) -> SlaterReport {
    let xs = inst.c_dom();
    let witnesses = inst
        .scenarios
        .iter()
        .map(|s| xs.iter().copied().find(|&x| s.g.get(x).is_some_and(|g| inst.s_cone.in_neg_interior(g))))
        .collect();
    SlaterReport { witnesses }
}
