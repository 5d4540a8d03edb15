//! Weak suprema and infima of finite sets under a cone order.
//!
//! For finite `M` and closed `K`, `cl(M − int K) = M − K`, so
//! `v ∈ wsup M ⇔ (∃y∈M: y − v ∈ K) ∧ (∀y∈M: y − v ∉ int K)`.

use serde::Serialize;

use crate::cones::{ConeError, PolyhedralCone};
use crate::linalg::{dot, sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Class {
    /// `v ∈ M − int K`
    Below,
    /// `v ∈ wsup M`
    Frontier,
    /// `v ∈ wsup M + int K`
    Above,
}

#[derive(Debug, Clone)]
pub struct FiniteValueSet<'a> {
    cone: &'a PolyhedralCone,
    points: Vec<Vec<f64>>,
}

impl<'a> FiniteValueSet<'a> {
    pub fn new(cone: &'a PolyhedralCone, points: Vec<Vec<f64>>) -> Result<Self, ConeError> {
        if points.is_empty() {
            return Err(ConeError::EmptySet);
        }
        for p in &points {
            cone.check_dim(p)?;
            if p.iter().any(|x| !x.is_finite()) {
                return Err(ConeError::NonFinite);
            }
        }
        Ok(FiniteValueSet { cone, points })
    }

    pub fn cone(&self) -> &'a PolyhedralCone {
        self.cone
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `−M`, for the `winf M = −wsup(−M)` identity.
    pub fn negated(&self) -> FiniteValueSet<'a> {
        FiniteValueSet { cone: self.cone, points: self.points.iter().map(|p| crate::linalg::neg(p)).collect() }
    }

    /// `v ∈ wsup M`.
    pub fn wsup_contains(&self, v: &[f64]) -> Result<bool, ConeError> {
        self.cone.check_dim(v)?;
        Ok(self.reaches(v) && !self.below(v))
    }

    /// `v ∈ winf M`.
    pub fn winf_contains(&self, v: &[f64]) -> Result<bool, ConeError> {
        self.cone.check_dim(v)?;
        let k = self.cone;
        let reached = self.points.iter().any(|y| k.dominates(v, y));
        let strictly_above = self.points.iter().any(|y| k.strictly_dominates(v, y));
        Ok(reached && !strictly_above)
    }

    /// `v ∈ M − K`.
    fn reaches(&self, v: &[f64]) -> bool {
        self.points.iter().any(|y| self.cone.dominates(y, v))
    }

    /// `v ∈ M − int K`.
    fn below(&self, v: &[f64]) -> bool {
        self.points.iter().any(|y| self.cone.strictly_dominates(y, v))
    }

    /// Indices of points not strictly dominated from above.
    pub fn wmax_indices(&self) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| !self.points.iter().any(|w| self.cone.strictly_dominates(w, &self.points[i])))
            .collect()
    }

    /// Indices of points not strictly dominated from below.
    pub fn wmin_indices(&self) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| !self.points.iter().any(|w| self.cone.strictly_dominates(&self.points[i], w)))
            .collect()
    }

    pub fn wmax(&self) -> Vec<Vec<f64>> {
        self.wmax_indices().into_iter().map(|i| self.points[i].clone()).collect()
    }

    pub fn wmin(&self) -> Vec<Vec<f64>> {
        self.wmin_indices().into_iter().map(|i| self.points[i].clone()).collect()
    }

    /// Position of `v` in `Y = (M − int K) ∪ wsup M ∪ (wsup M + int K)`.
    /// The last class is obtained by elimination.
    pub fn decomposition_class(&self, v: &[f64]) -> Result<Class, ConeError> {
        self.cone.check_dim(v)?;
        Ok(if self.below(v) {
            Class::Below
        } else if self.reaches(v) {
            Class::Frontier
        } else {
            Class::Above
        })
    }
}

/// Signed distance along `k` from `d` up to `p`:
/// `t(p, d) = maxᵢ aᵢ·(p − d) / aᵢ·k`, the least `t` with `d + t·k − p ∈ K`.
/// Requires `k ∈ int K`.
pub fn directional_offset(cone: &PolyhedralCone, p: &[f64], d: &[f64], k: &[f64]) -> f64 {
    let diff = sub(p, d);
    cone.normals()
        .iter()
        .map(|a| dot(a, &diff) / dot(a, k))
        .fold(f64::NEG_INFINITY, f64::max)
}
