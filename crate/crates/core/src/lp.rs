//! Dense two-phase simplex with Bland's anti-cycling rule.
//!
//! Problems are stated as maximization over variables with optional
//! lower/upper bounds and `≤`/`≥`/`=` rows. Internally every variable is
//! shifted, reflected or split so the tableau only sees nonnegative columns.
//! Strict inequalities are never accepted; callers encode strictness with an
//! explicit slack.

use thiserror::Error;

/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-9;
/// Reduced-cost optimality tolerance.
pub const OPT_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("row {row} has {found} coefficients, objective has {expected}")]
    RowWidth { row: usize, expected: usize, found: usize },
    #[error("bounds list has {found} entries for {expected} variables")]
    BoundsWidth { expected: usize, found: usize },
    #[error("variable {var} has lower bound {lower} above upper bound {upper}")]
    InvertedBounds { var: usize, lower: f64, upper: f64 },
    #[error("non-finite data in {0}")]
    NonFinite(&'static str),
    #[error("convex hull query needs at least one point")]
    EmptyPointSet,
    #[error("point {index} has dimension {found}, query has {expected}")]
    PointDimension { index: usize, expected: usize, found: usize },
    #[error("simplex exceeded {0} pivots")]
    PivotLimit(usize),
    #[error("optimal point violates row {row} by {violation:e}")]
    Residual { row: usize, violation: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Bound {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl Bound {
    pub const FREE: Bound = Bound { lower: None, upper: None };
    pub const NONNEG: Bound = Bound { lower: Some(0.0), upper: None };

    pub fn between(lower: f64, upper: f64) -> Self {
        Bound { lower: Some(lower), upper: Some(upper) }
    }
}

/// `maximize` (or `minimize`) `objective·x` subject to `constraints` and
/// per-variable `bounds`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub minimize: bool,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
}

impl LpProblem {
    /// A maximization problem whose variables all start free.
    pub fn maximize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LpProblem { objective, minimize: false, constraints: Vec::new(), bounds: vec![Bound::FREE; n] }
    }

    /// A minimization problem whose variables all start free.
    pub fn minimize(objective: Vec<f64>) -> Self {
        LpProblem { minimize: true, ..Self::maximize(objective) }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn bound(&mut self, var: usize, bound: Bound) -> &mut Self {
        self.bounds[var] = bound;
        self
    }

    pub fn all_nonnegative(&mut self) -> &mut Self {
        self.bounds.iter_mut().for_each(|b| *b = Bound::NONNEG);
        self
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(LpError::BoundsWidth { expected: n, found: self.bounds.len() });
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        for (row, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::RowWidth { row, expected: n, found: c.coeffs.len() });
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|a| !a.is_finite()) {
                return Err(LpError::NonFinite("constraint row"));
            }
        }
        for (var, b) in self.bounds.iter().enumerate() {
            if b.lower.is_some_and(|l| !l.is_finite()) || b.upper.is_some_and(|u| !u.is_finite()) {
                return Err(LpError::NonFinite("bounds"));
            }
            if let (Some(lower), Some(upper)) = (b.lower, b.upper) {
                if lower > upper {
                    return Err(LpError::InvertedBounds { var, lower, upper });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal { point: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpSolution::Optimal { .. })
    }

    pub fn point(&self) -> Option<&[f64]> {
        match self {
            LpSolution::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            LpSolution::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// How an original variable is expressed in tableau columns.
#[derive(Debug, Clone, Copy)]
enum Column {
    /// x = offset + col
    Shift { offset: f64, col: usize },
    /// x = offset - col
    Reflect { offset: f64, col: usize },
    /// x = pos - neg
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, cost: &mut [f64], cost_rhs: &mut f64) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        self.rhs[r] /= p;
        self.rows[r][c] = 1.0;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r];
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c];
            if f != 0.0 {
                for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                self.rows[i][c] = 0.0;
                self.rhs[i] -= f * pivot_rhs;
            }
        }
        let f = cost[c];
        if f != 0.0 {
            for (v, pv) in cost.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            cost[c] = 0.0;
            *cost_rhs -= f * pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Reduced costs of `c` with respect to the current basis.
    fn reduced_costs(&self, c: &[f64]) -> (Vec<f64>, f64) {
        let mut cost = c.to_vec();
        let mut cost_rhs = 0.0;
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = c[b];
            if cb != 0.0 {
                for (v, a) in cost.iter_mut().zip(&self.rows[i]) {
                    *v -= cb * a;
                }
                cost_rhs -= cb * self.rhs[i];
            }
        }
        for &b in &self.basis {
            cost[b] = 0.0;
        }
        (cost, cost_rhs)
    }

    /// Runs Bland's rule to optimality. Columns at or beyond `limit` may
    /// not enter. Returns false when unbounded.
    fn optimize(&mut self, c: &[f64], limit: usize, pivots: &mut usize) -> Result<bool, LpError> {
        let (mut cost, mut cost_rhs) = self.reduced_costs(c);
        loop {
            let Some(enter) = (0..limit).find(|&j| cost[j] > OPT_TOL) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][enter];
                if a > PIVOT_TOL {
                    let ratio = self.rhs[i].max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((best, br)) => {
                            let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                            if ratio < br && !tie || tie && self.basis[i] < self.basis[best] {
                                Some((i, ratio))
                            } else {
                                Some((best, br))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            *pivots += 1;
            if *pivots > MAX_PIVOTS {
                return Err(LpError::PivotLimit(MAX_PIVOTS));
            }
            self.pivot(r, enter, &mut cost, &mut cost_rhs);
        }
    }
}

/// Solves `p` to optimality, or reports infeasibility / unboundedness.
pub fn lp_solve(p: &LpProblem) -> Result<LpSolution, LpError> {
    p.validate()?;
    let n = p.num_vars();

    let mut columns = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut extra_rows: Vec<(usize, f64)> = Vec::new();
    for b in &p.bounds {
        let col = match (b.lower, b.upper) {
            (Some(l), upper) => {
                let c = ncols;
                ncols += 1;
                if let Some(u) = upper {
                    extra_rows.push((c, u - l));
                }
                Column::Shift { offset: l, col: c }
            }
            (None, Some(u)) => {
                ncols += 1;
                Column::Reflect { offset: u, col: ncols - 1 }
            }
            (None, None) => {
                ncols += 2;
                Column::Split { pos: ncols - 2, neg: ncols - 1 }
            }
        };
        columns.push(col);
    }
    let nstruct = ncols;

    // Rows over structural columns, with rhs >= 0 after sign normalization.
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
    for c in &p.constraints {
        let mut row = vec![0.0; nstruct];
        let mut rhs = c.rhs;
        for (j, &a) in c.coeffs.iter().enumerate() {
            match columns[j] {
                Column::Shift { offset, col } => {
                    row[col] += a;
                    rhs -= a * offset;
                }
                Column::Reflect { offset, col } => {
                    row[col] -= a;
                    rhs -= a * offset;
                }
                Column::Split { pos, neg } => {
                    row[pos] += a;
                    row[neg] -= a;
                }
            }
        }
        rows.push((row, c.relation, rhs));
    }
    for &(col, width) in &extra_rows {
        let mut row = vec![0.0; nstruct];
        row[col] = 1.0;
        rows.push((row, Relation::Le, width));
    }
    for (row, rel, rhs) in rows.iter_mut() {
        if *rhs < 0.0 {
            row.iter_mut().for_each(|v| *v = -*v);
            *rhs = -*rhs;
            *rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let nslack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let nart = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = nstruct + nslack + nart;
    let art_start = nstruct + nslack;

    let mut tab = Tableau { rows: Vec::new(), rhs: Vec::new(), basis: Vec::new(), width };
    let (mut s, mut a) = (nstruct, art_start);
    for (row, rel, rhs) in rows {
        let mut full = row;
        full.resize(width, 0.0);
        match rel {
            Relation::Le => {
                full[s] = 1.0;
                tab.basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                full[s] = -1.0;
                s += 1;
                full[a] = 1.0;
                tab.basis.push(a);
                a += 1;
            }
            Relation::Eq => {
                full[a] = 1.0;
                tab.basis.push(a);
                a += 1;
            }
        }
        tab.rows.push(full);
        tab.rhs.push(rhs);
    }

    let mut pivots = 0usize;
    // Only rows carrying an artificial contribute to the phase-1 objective.
    let rhs_scale = 1.0
        + tab
            .basis
            .iter()
            .zip(&tab.rhs)
            .filter(|(b, _)| **b >= art_start)
            .fold(0.0f64, |m, (_, v)| m.max(v.abs()));

    if nart > 0 {
        let mut phase1 = vec![0.0; width];
        phase1[art_start..].iter_mut().for_each(|v| *v = -1.0);
        tab.optimize(&phase1, width, &mut pivots)?;
        let infeasibility: f64 = tab
            .basis
            .iter()
            .zip(&tab.rhs)
            .filter(|(b, _)| **b >= art_start)
            .map(|(_, v)| *v)
            .sum();
        if infeasibility > FEAS_TOL * rhs_scale {
            return Ok(LpSolution::Infeasible);
        }
        // Drive remaining (zero-level) artificials out of the basis.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= art_start {
                let entering = (0..art_start)
                    .filter(|&j| tab.rows[i][j].abs() > 1e-9)
                    .max_by(|&x, &y| tab.rows[i][x].abs().total_cmp(&tab.rows[i][y].abs()));
                match entering {
                    Some(j) => {
                        let mut dummy = vec![0.0; width];
                        let mut dr = 0.0;
                        tab.pivot(i, j, &mut dummy, &mut dr);
                        i += 1;
                    }
                    None => {
                        tab.rows.remove(i);
                        tab.rhs.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let mut cost = vec![0.0; width];
    let sense = if p.minimize { -1.0 } else { 1.0 };
    for (j, &c) in p.objective.iter().enumerate() {
        let c = sense * c;
        match columns[j] {
            Column::Shift { col, .. } => {
                cost[col] += c;
            }
            Column::Reflect { col, .. } => {
                cost[col] -= c;
            }
            Column::Split { pos, neg } => {
                cost[pos] += c;
                cost[neg] -= c;
            }
        }
    }
    if !tab.optimize(&cost, art_start, &mut pivots)? {
        return Ok(LpSolution::Unbounded);
    }

    let mut std_values = vec![0.0; tab.width];
    for (i, &b) in tab.basis.iter().enumerate() {
        std_values[b] = tab.rhs[i].max(0.0);
    }
    let point: Vec<f64> = columns
        .iter()
        .map(|c| match *c {
            Column::Shift { offset, col } => offset + std_values[col],
            Column::Reflect { offset, col } => offset - std_values[col],
            Column::Split { pos, neg } => std_values[pos] - std_values[neg],
        })
        .collect();

    for (row, c) in p.constraints.iter().enumerate() {
        let lhs: f64 = c.coeffs.iter().zip(&point).map(|(a, x)| a * x).sum();
        let scale = 1.0 + c.rhs.abs() + c.coeffs.iter().zip(&point).map(|(a, x)| (a * x).abs()).sum::<f64>();
        let violation = match c.relation {
            Relation::Le => lhs - c.rhs,
            Relation::Ge => c.rhs - lhs,
            Relation::Eq => (lhs - c.rhs).abs(),
        };
        if violation > FEAS_TOL * scale {
            return Err(LpError::Residual { row, violation });
        }
    }
    let value = p.objective.iter().zip(&point).map(|(c, x)| c * x).sum();
    Ok(LpSolution::Optimal { point, value })
}

/// Convex-combination weights expressing `q` from `points`, if any.
///
/// Membership is relaxed by `tol` in the max norm: the returned weights
/// satisfy `|Σλᵢ pᵢ − q|∞ ≤ tol`, `λ ≥ 0`, `Σλ = 1`. With `tol == 0` the
/// coordinate rows are equalities.
pub fn convex_hull_membership(points: &[Vec<f64>], q: &[f64], tol: f64) -> Result<Option<Vec<f64>>, LpError> {
    if points.is_empty() {
        return Err(LpError::EmptyPointSet);
    }
    let d = q.len();
    for (index, p) in points.iter().enumerate() {
        if p.len() != d {
            return Err(LpError::PointDimension { index, expected: d, found: p.len() });
        }
    }
    let n = points.len();
    let mut lp = LpProblem::maximize(vec![0.0; n]);
    lp.all_nonnegative();
    lp.constrain(vec![1.0; n], Relation::Eq, 1.0);
    for j in 0..d {
        let row: Vec<f64> = points.iter().map(|p| p[j]).collect();
        if tol > 0.0 {
            lp.constrain(row.clone(), Relation::Le, q[j] + tol);
            lp.constrain(row, Relation::Ge, q[j] - tol);
        } else {
            lp.constrain(row, Relation::Eq, q[j]);
        }
    }
    Ok(match lp_solve(&lp)? {
        LpSolution::Optimal { point, .. } => Some(point),
        _ => None,
    })
}
