//! Scalar robust programs `min f(x) s.t. x ∈ C, g_t(x, v) ≤ 0 ∀v ∈ U_t ∀t`
//! and their four dual forms.

use serde::Serialize;

use crate::cones::{MAGNITUDE_LADDER, MEMBER_TOL, STRICT_TOL};
use crate::conjugate::{GroundSet, VectorMap};
use crate::error::{Error, Result};
use crate::farkas::RobustInstance;
use crate::linalg::dot;
use crate::lp::{lp_solve, Bound, LpProblem, LpSolution, Relation};

/// Golden-section refinement steps for the one-dimensional multiplier search.
pub const GOLDEN_STEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScalarVariant {
    Rcd1,
    Rcd2,
    Rcd3,
    Rcd4,
}

/// One constraint index `t` with its uncertainty grid.
#[derive(Debug, Clone, Serialize)]
pub struct ConstraintFamily {
    pub labels: Vec<String>,
    /// `members[j][x] = g_t(x, v_j)`, `None` for `+∞`.
    pub members: Vec<Vec<Option<f64>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarRobustProgram {
    pub ground: GroundSet,
    pub c_mask: Vec<bool>,
    pub f: Vec<Option<f64>>,
    pub families: Vec<ConstraintFamily>,
}

fn scalar_values(map: &VectorMap) -> Result<Vec<Option<f64>>> {
    if map.dim() != 1 {
        return Err(Error::Dimension { what: "scalar map", expected: 1, found: map.dim() });
    }
    Ok((0..map.len()).map(|i| map.get(i).map(|v| v[0])).collect())
}

impl ScalarRobustProgram {
    pub fn new(ground: GroundSet, c_mask: Vec<bool>, f: &VectorMap, families: Vec<ConstraintFamily>) -> Result<Self> {
        let n = ground.len();
        if c_mask.len() != n {
            return Err(Error::Dimension { what: "constraint mask", expected: n, found: c_mask.len() });
        }
        if f.len() != n {
            return Err(Error::Dimension { what: "objective map", expected: n, found: f.len() });
        }
        if families.is_empty() || families.iter().any(|fam| fam.members.is_empty()) {
            return Err(Error::NoScenarios);
        }
        for fam in &families {
            if fam.labels.len() != fam.members.len() {
                return Err(Error::Invalid("family labels and members differ in length".into()));
            }
            if let Some(bad) = fam.members.iter().find(|m| m.len() != n) {
                return Err(Error::Dimension { what: "constraint function", expected: n, found: bad.len() });
            }
        }
        let prog = ScalarRobustProgram { ground, c_mask, f: scalar_values(f)?, families };
        if prog.feasible().is_empty() {
            return Err(Error::EmptyFeasibleSet);
        }
        Ok(prog)
    }

    /// Reads the scalar structure off a vector instance with `m = 1`.
    ///
    /// With `p = 1` there is one constraint index and the scenarios form its
    /// grid. With `p > 1` and `S = R^p₊`, component `t` of the scenario
    /// parameter indexes `U_t`, and `g_t` must depend on that component only.
    pub fn from_instance(inst: &RobustInstance) -> Result<Self> {
        if inst.m() != 1 {
            return Err(Error::Dimension { what: "scalar objective", expected: 1, found: inst.m() });
        }
        let p = inst.p();
        let families = if p == 1 {
            let members = inst.scenarios.iter().map(|s| scalar_values(&s.g)).collect::<Result<Vec<_>>>()?;
            vec![ConstraintFamily { labels: inst.scenarios.iter().map(|s| s.label.clone()).collect(), members }]
        } else {
            let orthant = crate::cones::PolyhedralCone::orthant(p);
            if inst.s_cone.normals() != orthant.normals() {
                return Err(Error::Invalid("several constraint indices need S to be the nonnegative orthant".into()));
            }
            let mut fams = Vec::with_capacity(p);
            for t in 0..p {
                let mut params: Vec<f64> = Vec::new();
                let mut fam = ConstraintFamily { labels: Vec::new(), members: Vec::new() };
                for s in &inst.scenarios {
                    if s.param.len() != p {
                        return Err(Error::Dimension { what: "scenario parameter", expected: p, found: s.param.len() });
                    }
                    let col: Vec<Option<f64>> = s.g.values().iter().map(|v| v.finite().map(|g| g[t])).collect();
                    match params.iter().position(|&q| q == s.param[t]) {
                        Some(j) if fam.members[j] != col => {
                            return Err(Error::Invalid(format!("component {t} of scenario {} depends on more than its own parameter", s.label)));
                        }
                        Some(_) => {}
                        None => {
                            params.push(s.param[t]);
                            fam.labels.push(format!("{}", s.param[t]));
                            fam.members.push(col);
                        }
                    }
                }
                fams.push(fam);
            }
            fams
        };
        ScalarRobustProgram::new(inst.ground.clone(), inst.c_mask.clone(), &inst.f, families)
    }

    /// Indices of `C ∩ dom f`.
    pub fn c_dom(&self) -> Vec<usize> {
        (0..self.ground.len()).filter(|&x| self.c_mask[x] && self.f[x].is_some()).collect()
    }

    /// Indices of `A ∩ dom f`.
    pub fn feasible(&self) -> Vec<usize> {
        self.c_dom()
            .into_iter()
            .filter(|&x| self.families.iter().all(|fam| fam.members.iter().all(|g| g[x].is_some_and(|v| v <= MEMBER_TOL))))
            .collect()
    }

    fn shifted_f(&self, x: usize, xstar: &[f64]) -> f64 {
        self.f[x].unwrap() - dot(xstar, self.ground.point(x))
    }

    /// `max_v g_t(x, v)`.
    fn sup_family(&self, t: usize, x: usize) -> Option<f64> {
        self.families[t].members.iter().map(|g| g[x]).try_fold(f64::NEG_INFINITY, |acc, v| v.map(|v| acc.max(v)))
    }

    /// All selections `(u_t)_t` in lexicographic order.
    pub fn selections(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for fam in &self.families {
            out = out
                .into_iter()
                .flat_map(|s| {
                    (0..fam.members.len()).map(move |j| {
                        let mut s = s.clone();
                        s.push(j);
                        s
                    })
                })
                .collect();
        }
        out
    }

    fn check_xstar(&self, xstar: &[f64]) -> Result<()> {
        if xstar.len() != self.ground.dim() {
            return Err(Error::Dimension { what: "x*", expected: self.ground.dim(), found: xstar.len() });
        }
        Ok(())
    }

    /// Exact primal value and a minimizer of `f − x*` over `A`.
    pub fn primal(&self, xstar: &[f64]) -> Result<(f64, usize)> {
        self.check_xstar(xstar)?;
        self.feasible()
            .into_iter()
            .map(|x| (self.shifted_f(x, xstar), x))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .ok_or(Error::EmptyFeasibleSet)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ScalarCertificate {
    /// Selection `u_t` per constraint index and multipliers per index.
    Selection { selection: Vec<usize>, lambda: Vec<f64> },
    /// One multiplier per `(t, j)` pair, listed sparsely.
    Pairs { lambda: Vec<((usize, usize), f64)> },
    /// Single multiplier on a constraint index.
    Index { t: usize, lambda: f64 },
    /// Single multiplier on the pointwise max over `t` at a selection.
    SelectionMax { selection: Vec<usize>, lambda: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarDualityReport {
    pub variant: ScalarVariant,
    pub xstar: Vec<f64>,
    pub primal: f64,
    pub primal_argmin: usize,
    /// `+∞` when the dual is unbounded.
    pub dual: f64,
    pub certificate: Option<ScalarCertificate>,
    /// Outer maximizations carried out.
    pub grid_size: usize,
    pub notes: Vec<String>,
}

impl ScalarDualityReport {
    pub fn gap(&self) -> f64 {
        self.primal - self.dual
    }
}

/// `max θ s.t. θ ≤ f(x) − x*·x + Σ λⱼ hⱼ(x)`, `λ ≥ 0`, over rows where every
/// `hⱼ` is finite. Returns `None` when unbounded.
fn lagrangian_lp(prog: &ScalarRobustProgram, xstar: &[f64], h: &[&Vec<Option<f64>>]) -> Result<Option<(f64, Vec<f64>)>> {
    let nv = 1 + h.len();
    let mut obj = vec![0.0; nv];
    obj[0] = 1.0;
    let mut lp = LpProblem::maximize(obj);
    for j in 1..nv {
        lp.bound(j, Bound { lower: Some(0.0), upper: None });
    }
    let mut rows = 0;
    for x in prog.c_dom() {
        let Some(hx) = h.iter().map(|hj| hj[x]).collect::<Option<Vec<f64>>>() else { continue };
        let mut coeffs = Vec::with_capacity(nv);
        coeffs.push(1.0);
        coeffs.extend(hx.iter().map(|v| -v));
        lp.constrain(coeffs, Relation::Le, prog.shifted_f(x, xstar));
        rows += 1;
    }
    if rows == 0 {
        return Ok(None);
    }
    Ok(match lp_solve(&lp)? {
        LpSolution::Optimal { point, value } => Some((value, point[1..].to_vec())),
        LpSolution::Unbounded => None,
        LpSolution::Infeasible => return Err(Error::Invalid("Lagrangian LP reported infeasible".into())),
    })
}

/// `φ(λ) = min over x of f(x) − x*·x + λ h(x)`, skipping `h(x) = +∞`.
fn concave_value(prog: &ScalarRobustProgram, xstar: &[f64], h: &[Option<f64>], lambda: f64) -> f64 {
    prog.c_dom()
        .into_iter()
        .filter_map(|x| h[x].map(|hx| prog.shifted_f(x, xstar) + lambda * hx))
        .fold(f64::INFINITY, f64::min)
}

/// Ladder `{0, 1, 10, 100, 1000}` then golden-section refinement around the
/// best rung. Returns `(value, λ, notes)`.
fn maximize_concave(phi: impl Fn(f64) -> f64) -> (f64, f64, Vec<String>) {
    let mut rungs = vec![0.0];
    rungs.extend(MAGNITUDE_LADDER);
    let vals: Vec<f64> = rungs.iter().map(|&l| phi(l)).collect();
    let mut notes = Vec::new();
    let best = (0..rungs.len()).max_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(b.cmp(&a))).unwrap();
    let slack = |v: f64| 1e-12 * (1.0 + v.abs());
    let unimodal = (1..=best).all(|i| vals[i] + slack(vals[i]) >= vals[i - 1]) && (best + 1..vals.len()).all(|i| vals[i] <= vals[i - 1] + slack(vals[i]));
    if !unimodal {
        notes.push("ladder values not unimodal; concavity suspect".into());
    }
    if best + 1 == rungs.len() && vals[best] > vals[best - 1] + slack(vals[best]) {
        notes.push("maximum at the top of the ladder; bracket not closed".into());
    }
    let (mut a, mut b) = (rungs[best.saturating_sub(1)], rungs[(best + 1).min(rungs.len() - 1)]);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - r * (b - a), a + r * (b - a));
    let (mut fc, mut fd) = (phi(c), phi(d));
    for _ in 0..GOLDEN_STEPS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = phi(d);
        }
    }
    let mut out = (vals[best], rungs[best]);
    for (v, l) in [(fc, c), (fd, d)] {
        if v > out.0 {
            out = (v, l);
        }
    }
    (out.0, out.1, notes)
}

pub fn solve_scalar_duals(prog: &ScalarRobustProgram, xstar: &[f64], variant: ScalarVariant) -> Result<ScalarDualityReport> {
    let (primal, primal_argmin) = prog.primal(xstar)?;
    let mut notes = Vec::new();
    let mut best: Option<(f64, ScalarCertificate)> = None;
    let mut unbounded = false;
    let keep = |v: f64, cert: ScalarCertificate, best: &mut Option<(f64, ScalarCertificate)>| {
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            *best = Some((v, cert));
        }
    };
    let grid_size;
    match variant {
        ScalarVariant::Rcd1 => {
            let sels = prog.selections();
            grid_size = sels.len();
            for sel in sels {
                let h: Vec<&Vec<Option<f64>>> = sel.iter().enumerate().map(|(t, &j)| &prog.families[t].members[j]).collect();
                match lagrangian_lp(prog, xstar, &h)? {
                    Some((v, lambda)) => keep(v, ScalarCertificate::Selection { selection: sel, lambda }, &mut best),
                    None => unbounded = true,
                }
            }
        }
        ScalarVariant::Rcd4 => {
            let pairs: Vec<(usize, usize)> =
                prog.families.iter().enumerate().flat_map(|(t, fam)| (0..fam.members.len()).map(move |j| (t, j))).collect();
            grid_size = 1;
            let h: Vec<&Vec<Option<f64>>> = pairs.iter().map(|&(t, j)| &prog.families[t].members[j]).collect();
            match lagrangian_lp(prog, xstar, &h)? {
                Some((v, lambda)) => {
                    let lambda = pairs.into_iter().zip(lambda).filter(|(_, l)| *l != 0.0).collect();
                    keep(v, ScalarCertificate::Pairs { lambda }, &mut best);
                }
                None => unbounded = true,
            }
        }
        ScalarVariant::Rcd2 => {
            grid_size = prog.families.len();
            for t in 0..prog.families.len() {
                let h: Vec<Option<f64>> = (0..prog.ground.len()).map(|x| prog.sup_family(t, x)).collect();
                let (v, lambda, n) = maximize_concave(|l| concave_value(prog, xstar, &h, l));
                notes.extend(n.into_iter().map(|s| format!("t={t}: {s}")));
                keep(v, ScalarCertificate::Index { t, lambda }, &mut best);
            }
        }
        ScalarVariant::Rcd3 => {
            let sels = prog.selections();
            grid_size = sels.len();
            for sel in sels {
                let h: Vec<Option<f64>> = (0..prog.ground.len())
                    .map(|x| sel.iter().enumerate().map(|(t, &j)| prog.families[t].members[j][x]).try_fold(f64::NEG_INFINITY, |a, v| v.map(|v| a.max(v))))
                    .collect();
                let (v, lambda, n) = maximize_concave(|l| concave_value(prog, xstar, &h, l));
                notes.extend(n.into_iter().map(|s| format!("u={sel:?}: {s}")));
                keep(v, ScalarCertificate::SelectionMax { selection: sel, lambda }, &mut best);
            }
        }
    }
    let (dual, certificate) = if unbounded {
        notes.push("Lagrangian LP unbounded for some selection".into());
        (f64::INFINITY, None)
    } else {
        let (v, c) = best.ok_or(Error::Invalid("no dual value computed".into()))?;
        (v, Some(c))
    };
    Ok(ScalarDualityReport { variant, xstar: xstar.to_vec(), primal, primal_argmin, dual, certificate, grid_size, notes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SlaterVariant {
    /// Every selection has a point with all selected constraints strictly negative.
    PerSelection,
    /// Every index has a point with the sup over its grid strictly negative.
    PerIndex,
    /// Every selection has a point with the max over indices strictly negative.
    PerSelectionMax,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarSlaterReport {
    pub variant: SlaterVariant,
    /// Per selection (or per index), the first witness in `C ∩ dom f`.
    pub witnesses: Vec<Option<usize>>,
}

impl ScalarSlaterReport {
    pub fn holds(&self) -> bool {
        self.witnesses.iter().all(Option::is_some)
    }
}

pub fn check_scalar_slater(prog: &ScalarRobustProgram, variant: SlaterVariant) -> ScalarSlaterReport {
    let xs = prog.c_dom();
    let strict = |v: Option<f64>| v.is_some_and(|v| v < -STRICT_TOL);
    let witnesses = match variant {
        SlaterVariant::PerSelection | SlaterVariant::PerSelectionMax => prog
            .selections()
            .iter()
            .map(|sel| {
                xs.iter().copied().find(|&x| {
                    let worst = sel.iter().enumerate().map(|(t, &j)| prog.families[t].members[j][x]).try_fold(f64::NEG_INFINITY, |a, v| v.map(|v| a.max(v)));
                    match variant {
                        SlaterVariant::PerSelectionMax => strict(worst),
                        _ => sel.iter().enumerate().all(|(t, &j)| strict(prog.families[t].members[j][x])),
                    }
                })
            })
            .collect(),
        SlaterVariant::PerIndex => {
            (0..prog.families.len()).map(|t| xs.iter().copied().find(|&x| strict(prog.sup_family(t, x)))).collect()
        }
    };
    ScalarSlaterReport { variant, witnesses }
}
