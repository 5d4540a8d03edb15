//! Extended-valued maps on a finite ground set and conjugate epigraphs.

use serde::{Deserialize, Serialize};

use crate::cones::PolyhedralCone;
use crate::error::{Error, Result};
use crate::linalg::{add, axpy, dot, sub};
use crate::order::FiniteValueSet;

/// The discretized decision space `X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl GroundSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).ok_or(Error::EmptyGround)?;
        for p in &points {
            if p.len() != dim {
                return Err(Error::Dimension { what: "ground point", expected: dim, found: p.len() });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("ground point"));
            }
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(Error::DuplicatePoint(j, i));
                }
            }
        }
        Ok(GroundSet { dim, points })
    }

    /// Evenly spaced points `lower, lower + h, …, upper` on the real line.
    pub fn interval(lower: f64, upper: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return GroundSet::new(vec![vec![lower]]);
        }
        let h = (upper - lower) / (count - 1) as f64;
        GroundSet::new((0..count).map(|i| vec![lower + h * i as f64]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }
}

/// A value in `R^m ∪ {+∞}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ExtValue {
    Finite(Vec<f64>),
    PlusInf,
}

impl ExtValue {
    pub fn finite(&self) -> Option<&[f64]> {
        match self {
            ExtValue::Finite(v) => Some(v),
            ExtValue::PlusInf => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtValue::Finite(_))
    }
}

/// A proper map from ground-set indices to `R^m ∪ {+∞}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorMap {
    dim: usize,
    values: Vec<ExtValue>,
}

impl VectorMap {
    pub fn new(dim: usize, values: Vec<ExtValue>) -> Result<Self> {
        for v in &values {
            if let ExtValue::Finite(y) = v {
                if y.len() != dim {
                    return Err(Error::Dimension { what: "map value", expected: dim, found: y.len() });
                }
                if y.iter().any(|t| !t.is_finite()) {
                    return Err(Error::NonFinite("map value"));
                }
            }
        }
        if !values.iter().any(ExtValue::is_finite) {
            return Err(Error::Improper);
        }
        Ok(VectorMap { dim, values })
    }

    /// Everywhere-finite map from a closure over ground points.
    pub fn from_fn(ground: &GroundSet, dim: usize, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        VectorMap::new(dim, ground.points().iter().map(|x| ExtValue::Finite(f(x))).collect())
    }

    pub fn constant(len: usize, value: Vec<f64>) -> Result<Self> {
        let dim = value.len();
        VectorMap::new(dim, vec![ExtValue::Finite(value); len])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[ExtValue] {
        &self.values
    }

    pub fn get(&self, i: usize) -> Option<&[f64]> {
        self.values[i].finite()
    }

    /// Indices of `dom F`.
    pub fn domain(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i].is_finite()).collect()
    }

    /// `F + G` with `(+∞) + y = y + (+∞) = +∞`.
    pub fn add(&self, other: &VectorMap) -> Result<VectorMap> {
        self.check_same(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| match (a, b) {
                (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(add(a, b)),
                _ => ExtValue::PlusInf,
            })
            .collect();
        VectorMap::new(self.dim, values)
    }

    fn check_same(&self, other: &VectorMap) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension { what: "map codomain", expected: self.dim, found: other.dim });
        }
        if self.values.len() != other.values.len() {
            return Err(Error::Dimension { what: "map length", expected: self.values.len(), found: other.values.len() });
        }
        Ok(())
    }
}

/// Dense `rows × cols` matrix acting as `x ↦ A·x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearOperator {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl LinearOperator {
    /// Row-major construction.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::OperatorShape { expected: rows * cols, found: data.len() });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("operator"));
        }
        Ok(LinearOperator { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        LinearOperator { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// `k·x*ᵀ`, i.e. `x ↦ ⟨x*, x⟩ k`.
    pub fn rank_one(k: &[f64], xstar: &[f64]) -> Self {
        let data = k.iter().flat_map(|ki| xstar.iter().map(move |xj| ki * xj)).collect();
        LinearOperator { rows: k.len(), cols: xstar.len(), data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "operator dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn add(&self, other: &LinearOperator) -> LinearOperator {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        LinearOperator { rows: self.rows, cols: self.cols, data: add(&self.data, &other.data) }
    }

    pub fn sub(&self, other: &LinearOperator) -> LinearOperator {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        LinearOperator { rows: self.rows, cols: self.cols, data: sub(&self.data, &other.data) }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == 0.0)
    }
}

/// A point `(L, y)` of `L(X, Y) × Y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpiPoint {
    pub op: LinearOperator,
    pub y: Vec<f64>,
}

impl EpiPoint {
    pub fn new(op: LinearOperator, y: Vec<f64>) -> Result<Self> {
        if op.rows() != y.len() {
            return Err(Error::Dimension { what: "epigraph point", expected: op.rows(), found: y.len() });
        }
        Ok(EpiPoint { op, y })
    }

    /// `(0, y)`.
    pub fn vertical(n: usize, y: Vec<f64>) -> Self {
        EpiPoint { op: LinearOperator::zeros(y.len(), n), y }
    }
}

fn check_epi(ground: &GroundSet, f: &VectorMap, cone: &PolyhedralCone, p: &EpiPoint) -> Result<()> {
    if f.len() != ground.len() {
        return Err(Error::Dimension { what: "map length", expected: ground.len(), found: f.len() });
    }
    if f.dim() != cone.dim() {
        return Err(Error::Dimension { what: "map codomain", expected: cone.dim(), found: f.dim() });
    }
    if p.op.cols() != ground.dim() || p.op.rows() != cone.dim() {
        return Err(Error::Dimension { what: "operator", expected: cone.dim() * ground.dim(), found: p.op.rows() * p.op.cols() });
    }
    if p.y.len() != cone.dim() {
        return Err(Error::Dimension { what: "epigraph vector", expected: cone.dim(), found: p.y.len() });
    }
    Ok(())
}

/// `(L, y) ∈ epi F* ⇔ y − L(x) + F(x) ∉ −int K` for every `x ∈ dom F`.
pub fn epi_conjugate_contains(ground: &GroundSet, f: &VectorMap, cone: &PolyhedralCone, p: &EpiPoint) -> Result<bool> {
    check_epi(ground, f, cone, p)?;
    Ok(first_violation(ground, f, cone, p).is_none())
}

/// The first `x ∈ dom F` with `y − L(x) + F(x) ∈ −int K`.
pub fn first_violation(ground: &GroundSet, f: &VectorMap, cone: &PolyhedralCone, p: &EpiPoint) -> Option<usize> {
    f.domain().into_iter().find(|&i| {
        let fx = f.get(i).expect("domain index");
        let w = add(&sub(&p.y, &p.op.apply(ground.point(i))), fx);
        cone.in_neg_interior(&w)
    })
}

/// `I_D`: zero on the mask, `+∞` elsewhere.
pub fn indicator(mask: &[bool], dim: usize) -> Result<VectorMap> {
    if !mask.iter().any(|&b| b) {
        return Err(Error::EmptyMask);
    }
    let values = mask.iter().map(|&b| if b { ExtValue::Finite(vec![0.0; dim]) } else { ExtValue::PlusInf }).collect();
    VectorMap::new(dim, values)
}

/// `x ↦ F(x) + I_C(x) + ⟨z*, G_u(x)⟩ k`.
pub fn composite_k(f: &VectorMap, c: &[bool], zstar: &[f64], gu: &VectorMap, k: &[f64]) -> Result<VectorMap> {
    composite(f, c, gu, |g| axpy(&vec![0.0; k.len()], dot(zstar, g), k), zstar.len(), k.len())
}

/// `x ↦ F(x) + I_C(x) + T(G_u(x))` with `T : R^p → R^m`.
pub fn composite_t(f: &VectorMap, c: &[bool], t: &LinearOperator, gu: &VectorMap) -> Result<VectorMap> {
    composite(f, c, gu, |g| t.apply(g), t.cols(), t.rows())
}

fn composite(
    f: &VectorMap,
    c: &[bool],
    gu: &VectorMap,
    lift: impl Fn(&[f64]) -> Vec<f64>,
    p: usize,
    m: usize,
) -> Result<VectorMap> {
    if f.dim() != m {
        return Err(Error::Dimension { what: "map codomain", expected: m, found: f.dim() });
    }
    if gu.dim() != p {
        return Err(Error::Dimension { what: "constraint codomain", expected: p, found: gu.dim() });
    }
    if c.len() != f.len() || gu.len() != f.len() {
        return Err(Error::Dimension { what: "map length", expected: f.len(), found: c.len().min(gu.len()) });
    }
    let values = (0..f.len())
        .map(|i| match (f.get(i), gu.get(i), c[i]) {
            (Some(fx), Some(gx), true) => ExtValue::Finite(add(fx, &lift(gx))),
            _ => ExtValue::PlusInf,
        })
        .collect();
    VectorMap::new(m, values)
}

/// The value set `{L(x) − F(x) : x ∈ dom F}` whose weak supremum is `F*(L)`.
#[derive(Debug, Clone)]
pub struct ConjugateFrontier<'a> {
    set: FiniteValueSet<'a>,
    wmax: Vec<Vec<f64>>,
}

impl<'a> ConjugateFrontier<'a> {
    pub fn values(&self) -> &[Vec<f64>] {
        self.set.points()
    }

    pub fn wmax(&self) -> &[Vec<f64>] {
        &self.wmax
    }

    /// `v ∈ F*(L)`.
    pub fn contains(&self, v: &[f64]) -> Result<bool> {
        Ok(self.set.wsup_contains(v)?)
    }
}

pub fn conjugate_frontier<'a>(
    ground: &GroundSet,
    f: &VectorMap,
    cone: &'a PolyhedralCone,
    l: &LinearOperator,
) -> Result<ConjugateFrontier<'a>> {
    check_epi(ground, f, cone, &EpiPoint { op: l.clone(), y: vec![0.0; cone.dim()] })?;
    let values = f.domain().into_iter().map(|i| sub(&l.apply(ground.point(i)), f.get(i).unwrap())).collect();
    let set = FiniteValueSet::new(cone, values)?;
    let wmax = set.wmax();
    Ok(ConjugateFrontier { set, wmax })
}
