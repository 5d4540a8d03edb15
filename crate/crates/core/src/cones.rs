//! Polyhedral cones carried in both halfspace and generator form.
//!
//! `K = {y : aᵢ·y ≥ 0 ∀i} = cone(g₁, …, g_r)`. Normals are stored scaled to
//! unit length so the strict-inequality slack [`STRICT_TOL`] has the same
//! meaning for every facet.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::dot;
use crate::lp::{lp_solve, Bound, LpError, LpProblem, LpSolution, Relation};

/// `aᵢ·y < 0` is evaluated as `aᵢ·y < −STRICT_TOL`.
pub const STRICT_TOL: f64 = 1e-9;
/// Slack for closed membership `aᵢ·y ≥ −MEMBER_TOL`.
pub const MEMBER_TOL: f64 = 1e-9;

const CROSS_CHECK_SAMPLES: usize = 96;
const CROSS_CHECK_SEED: u64 = 0x5eed_c0de;
/// Magnitudes applied to the dual-cone simplex grid, truncated by resolution.
pub const MAGNITUDE_LADDER: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("expected a vector of dimension {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("cone needs at least one nonzero normal (a cone equal to the whole space is not proper)")]
    NotProper,
    #[error("cone has no generators")]
    NoGenerators,
    #[error("generator {generator} violates normal {normal} (product {product:e})")]
    GeneratorViolatesNormal { generator: usize, normal: usize, product: f64 },
    #[error("cone has empty interior")]
    EmptyInterior,
    #[error("halfspace and generator descriptions disagree at {point:?}")]
    RepresentationMismatch { point: Vec<f64> },
    #[error("direction is not interior to the cone: normal {normal} gives {product:e}")]
    NotInterior { normal: usize, product: f64 },
    #[error("vector is not in the dual cone: generator {generator} gives {product:e}")]
    NotInDualCone { generator: usize, product: f64 },
    #[error("value set is empty")]
    EmptySet,
    #[error("non-finite cone data")]
    NonFinite,
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyhedralCone {
    dim: usize,
    normals: Vec<Vec<f64>>,
    generators: Vec<Vec<f64>>,
}

impl PolyhedralCone {
    /// Builds a cone from both descriptions and cross-validates them.
    pub fn new(normals: Vec<Vec<f64>>, generators: Vec<Vec<f64>>) -> Result<Self, ConeError> {
        let dim = normals.first().or(generators.first()).map(Vec::len).ok_or(ConeError::NotProper)?;
        for v in normals.iter().chain(&generators) {
            if v.len() != dim {
                return Err(ConeError::Dimension { expected: dim, found: v.len() });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(ConeError::NonFinite);
            }
        }
        let normals: Vec<Vec<f64>> = normals
            .into_iter()
            .filter_map(|a| {
                let norm = dot(&a, &a).sqrt();
                (norm > 1e-12).then(|| a.iter().map(|x| x / norm).collect())
            })
            .collect();
        if normals.is_empty() {
            return Err(ConeError::NotProper);
        }
        if generators.is_empty() {
            return Err(ConeError::NoGenerators);
        }
        for (gi, g) in generators.iter().enumerate() {
            let scale = 1.0 + dot(g, g).sqrt();
            for (ai, a) in normals.iter().enumerate() {
                let product = dot(a, g);
                if product < -MEMBER_TOL * scale {
                    return Err(ConeError::GeneratorViolatesNormal { generator: gi, normal: ai, product });
                }
            }
        }
        let cone = PolyhedralCone { dim, normals, generators };
        if !cone.has_interior()? {
            return Err(ConeError::EmptyInterior);
        }
        cone.cross_validate()?;
        Ok(cone)
    }

    /// The nonnegative orthant `R^m₊`.
    pub fn orthant(dim: usize) -> Self {
        let unit = |i: usize| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect::<Vec<_>>();
        PolyhedralCone { dim, normals: (0..dim).map(unit).collect(), generators: (0..dim).map(unit).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn check_dim(&self, y: &[f64]) -> Result<(), ConeError> {
        if y.len() != self.dim {
            return Err(ConeError::Dimension { expected: self.dim, found: y.len() });
        }
        Ok(())
    }

    fn products<'a>(&'a self, y: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        assert_eq!(y.len(), self.dim, "cone dimension mismatch");
        self.normals.iter().map(move |a| dot(a, y))
    }

    /// `y ∈ K` up to [`MEMBER_TOL`].
    pub fn contains(&self, y: &[f64]) -> bool {
        self.products(y).all(|p| p >= -MEMBER_TOL)
    }

    /// `y ∈ int K`: every facet product exceeds [`STRICT_TOL`].
    pub fn in_interior(&self, y: &[f64]) -> bool {
        self.products(y).all(|p| p > STRICT_TOL)
    }

    fn diff_products<'a>(&'a self, a: &'a [f64], b: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        assert!(a.len() == self.dim && b.len() == self.dim, "cone dimension mismatch");
        self.normals.iter().map(move |n| n.iter().zip(a.iter().zip(b)).map(|(ni, (ai, bi))| ni * (ai - bi)).sum())
    }

    /// `a − b ∈ K`, without forming the difference.
    pub fn dominates(&self, a: &[f64], b: &[f64]) -> bool {
        self.diff_products(a, b).all(|p| p >= -MEMBER_TOL)
    }

    /// `a − b ∈ int K`, without forming the difference.
    pub fn strictly_dominates(&self, a: &[f64], b: &[f64]) -> bool {
        self.diff_products(a, b).all(|p| p > STRICT_TOL)
    }

    /// `y ∈ −int K`: every facet product is below `−STRICT_TOL`.
    pub fn in_neg_interior(&self, y: &[f64]) -> bool {
        self.products(y).all(|p| p < -STRICT_TOL)
    }

    /// `z ∈ K⁺`, the dual cone, tested against the generators.
    pub fn dual_contains(&self, z: &[f64]) -> bool {
        assert_eq!(z.len(), self.dim, "cone dimension mismatch");
        self.generators.iter().all(|g| dot(z, g) >= -MEMBER_TOL * (1.0 + dot(g, g).sqrt()))
    }

    /// Sum of generators; interior whenever the interior is nonempty.
    pub fn interior_point(&self) -> Vec<f64> {
        let mut k = vec![0.0; self.dim];
        for g in &self.generators {
            for (ki, gi) in k.iter_mut().zip(g) {
                *ki += gi;
            }
        }
        k
    }

    /// Smallest `ᾱ` such that `y + αk ∈ −int K ⇔ α < ᾱ`.
    pub fn threshold_alpha(&self, y: &[f64], k: &[f64]) -> Result<f64, ConeError> {
        self.check_dim(y)?;
        self.check_dim(k)?;
        let mut alpha = f64::INFINITY;
        for (normal, a) in self.normals.iter().enumerate() {
            let ak = dot(a, k);
            if ak <= STRICT_TOL {
                return Err(ConeError::NotInterior { normal, product: ak });
            }
            alpha = alpha.min(-dot(a, y) / ak);
        }
        Ok(alpha)
    }

    /// Is `y` a nonnegative combination of the generators (up to `tol`)?
    pub fn generator_hull_contains(&self, y: &[f64], tol: f64) -> Result<bool, ConeError> {
        self.check_dim(y)?;
        let r = self.generators.len();
        let mut lp = LpProblem::maximize(vec![0.0; r]);
        lp.all_nonnegative();
        for j in 0..self.dim {
            let row: Vec<f64> = self.generators.iter().map(|g| g[j]).collect();
            lp.constrain(row.clone(), Relation::Le, y[j] + tol);
            lp.constrain(row, Relation::Ge, y[j] - tol);
        }
        Ok(lp_solve(&lp)?.is_optimal())
    }

    fn has_interior(&self) -> Result<bool, ConeError> {
        // max t  s.t.  aᵢ·y ≥ t,  −1 ≤ y ≤ 1,  t ≤ 1
        let m = self.dim;
        let mut obj = vec![0.0; m + 1];
        obj[m] = 1.0;
        let mut lp = LpProblem::maximize(obj);
        for j in 0..m {
            lp.bound(j, Bound::between(-1.0, 1.0));
        }
        lp.bound(m, Bound { lower: None, upper: Some(1.0) });
        for a in &self.normals {
            let mut row = a.clone();
            row.push(-1.0);
            lp.constrain(row, Relation::Ge, 0.0);
        }
        Ok(match lp_solve(&lp)? {
            LpSolution::Optimal { value, .. } => value > 1e-7,
            _ => false,
        })
    }

    /// Random directions that satisfy every normal with margin must be
    /// generated by the generators.
    fn cross_validate(&self) -> Result<(), ConeError> {
        let mut rng = ChaCha8Rng::seed_from_u64(CROSS_CHECK_SEED);
        let mut candidates: Vec<Vec<f64>> = vec![self.interior_point()];
        for _ in 0..CROSS_CHECK_SAMPLES {
            candidates.push((0..self.dim).map(|_| rng.gen_range(-1.0..1.0)).collect());
        }
        for y in candidates {
            let norm = dot(&y, &y).sqrt();
            if norm < 1e-9 {
                continue;
            }
            let y: Vec<f64> = y.iter().map(|v| v / norm).collect();
            if self.normals.iter().all(|a| dot(a, &y) >= 1e-6) && !self.generator_hull_contains(&y, 1e-7)? {
                return Err(ConeError::RepresentationMismatch { point: y });
            }
        }
        Ok(())
    }
}

/// A vector in `int K`; the direction `k` of the sectional subspace `E_k`
/// and of the scalarized dual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Direction(Vec<f64>);

impl Direction {
    pub fn new(cone: &PolyhedralCone, k: Vec<f64>) -> Result<Self, ConeError> {
        cone.check_dim(&k)?;
        for (normal, a) in cone.normals().iter().enumerate() {
            let product = dot(a, &k);
            if product <= STRICT_TOL {
                return Err(ConeError::NotInterior { normal, product });
            }
        }
        Ok(Direction(k))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Deref for Direction {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A multiplier `z* ∈ S⁺`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualVector(Vec<f64>);

impl DualVector {
    pub fn new(cone: &PolyhedralCone, z: Vec<f64>) -> Result<Self, ConeError> {
        cone.check_dim(&z)?;
        for (generator, g) in cone.generators().iter().enumerate() {
            let product = dot(&z, g);
            if product < -MEMBER_TOL * (1.0 + dot(g, g).sqrt()) {
                return Err(ConeError::NotInDualCone { generator, product });
            }
        }
        Ok(DualVector(z))
    }

    pub fn zero(dim: usize) -> Self {
        DualVector(vec![0.0; dim])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| *v == 0.0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Deref for DualVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// `y ∈ −int K`.
pub fn in_neg_interior(cone: &PolyhedralCone, y: &[f64]) -> Result<bool, ConeError> {
    cone.check_dim(y)?;
    Ok(cone.in_neg_interior(y))
}

/// Threshold `ᾱ = minᵢ(−aᵢ·y / aᵢ·k)`.
pub fn threshold_alpha(cone: &PolyhedralCone, y: &[f64], k: &Direction) -> Result<f64, ConeError> {
    cone.threshold_alpha(y, k)
}

/// Deterministic grid of `S⁺`.
///
/// `S⁺` is generated by the normals of `S`; weights on those normals run over
/// the simplex grid with step `1/resolution`, each grid vector is scaled by
/// the first `min(resolution, 4)` entries of [`MAGNITUDE_LADDER`], and the
/// zero vector leads the list.
pub fn sample_dual_cone(s: &PolyhedralCone, resolution: usize) -> Vec<DualVector> {
    let resolution = resolution.max(1);
    let directions = dual_cone_directions(s, resolution);
    let ladder = &MAGNITUDE_LADDER[..resolution.min(MAGNITUDE_LADDER.len())];
    let mut out = vec![DualVector::zero(s.dim())];
    for &scale in ladder {
        for d in &directions {
            let z: Vec<f64> = d.iter().map(|v| v * scale).collect();
            if s.dual_contains(&z) {
                out.push(DualVector(z));
            }
        }
    }
    out
}

/// Distinct nonzero normal combinations with simplex-grid weights.
pub fn dual_cone_directions(s: &PolyhedralCone, resolution: usize) -> Vec<Vec<f64>> {
    let q = s.normals().len();
    let mut directions: Vec<Vec<f64>> = Vec::new();
    for weights in simplex_grid(q, resolution.max(1)) {
        let mut z = vec![0.0; s.dim()];
        for (w, a) in weights.iter().zip(s.normals()) {
            for (zi, ai) in z.iter_mut().zip(a) {
                *zi += w * ai;
            }
        }
        for v in z.iter_mut() {
            if v.abs() < 1e-14 {
                *v = 0.0;
            }
        }
        if z.iter().all(|v| *v == 0.0) || directions.iter().any(|d| d == &z) {
            continue;
        }
        directions.push(z);
    }
    directions
}

/// All weight vectors of length `parts` with entries in `{0, 1/res, …, 1}`
/// summing to one, in lexicographically decreasing order of the first entry.
pub fn simplex_grid(parts: usize, res: usize) -> Vec<Vec<f64>> {
    fn rec(parts: usize, left: usize, res: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.iter().map(|&c| c as f64 / res as f64).collect());
            cur.pop();
            return;
        }
        for take in (0..=left).rev() {
            cur.push(take);
            rec(parts - 1, left - take, res, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(parts, res, res, &mut Vec::new(), &mut out);
    }
    out
}
