//! JSON instance, probe and perturbation files.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cones::{Direction, PolyhedralCone};
use crate::conjugate::{EpiPoint, ExtValue, GroundSet, LinearOperator, VectorMap};
use crate::error::Error;
use crate::farkas::{AffineFamily, Declarations, RobustInstance, Scenario};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid field {path}: {source}")]
    Field { path: String, source: Error },
}

fn field(path: impl Into<String>) -> impl FnOnce(Error) -> LoadError {
    let path = path.into();
    move |source| LoadError::Field { path, source }
}

fn cone_field(path: &'static str) -> impl FnOnce(crate::cones::ConeError) -> LoadError {
    move |e| LoadError::Field { path: path.into(), source: e.into() }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Dims {
    pub n: usize,
    pub m: usize,
    pub p: usize,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    pub normals: Vec<Vec<f64>>,
    pub generators: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroundSpec {
    Interval { lower: f64, upper: f64, count: usize },
    Points(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintSpec {
    #[default]
    All,
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Mask(Vec<bool>),
}

/// A vector-valued map on the ground set.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    /// One row per ground point, `null` for `+∞`.
    Table(Vec<Option<Vec<f64>>>),
    /// Per component, polynomial coefficients in `x₀` (lowest degree first).
    Poly(Vec<Vec<f64>>),
    /// `offset + matrix·x`.
    Affine { offset: Vec<f64>, matrix: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    #[serde(default)]
    pub label: Option<String>,
    pub param: Vec<f64>,
    /// Omitted when the declared family generates it.
    #[serde(default)]
    pub g: Option<MapSpec>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub base: MapSpec,
    pub slopes: Vec<MapSpec>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DeclarationSpec {
    #[serde(default)]
    pub convex_regime: bool,
    #[serde(default)]
    pub compact_u: bool,
    #[serde(default)]
    pub concave_in_u: Option<FamilySpec>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "default_resolution")]
    pub dual_resolution: usize,
    /// Extra `m × p` operators appended to the rank-one lifts.
    #[serde(default)]
    pub extra_operators: Vec<Vec<Vec<f64>>>,
    /// Adds `j·step·d` for `j = 1..=count` along every grid direction `d`.
    #[serde(default)]
    pub refine: Option<RefineSpec>,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RefineSpec {
    pub step: f64,
    pub count: usize,
}

fn default_resolution() -> usize {
    3
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { dual_resolution: default_resolution(), extra_operators: Vec::new(), refine: None }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default = "default_gap")]
    pub gap: f64,
}

fn default_gap() -> f64 {
    1e-3
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        ToleranceSpec { gap: default_gap() }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub name: String,
    pub dims: Dims,
    pub cone_k: ConeSpec,
    pub cone_s: ConeSpec,
    pub direction: Vec<f64>,
    pub ground: GroundSpec,
    #[serde(default)]
    pub constraint_set: ConstraintSpec,
    pub objective: MapSpec,
    pub scenarios: Vec<ScenarioSpec>,
    #[serde(default)]
    pub declarations: DeclarationSpec,
    #[serde(default)]
    pub grids: GridSpec,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
}

#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub name: String,
    pub instance: RobustInstance,
    pub extra_operators: Vec<LinearOperator>,
    pub dual_resolution: usize,
    pub refine: Option<RefineSpec>,
    pub tolerances: ToleranceSpec,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, LoadError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        LoadError::Schema { path, message: e.into_inner().to_string() }
    })
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|e| LoadError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn build_map(spec: &MapSpec, ground: &GroundSet, dim: usize, path: &str) -> Result<VectorMap, LoadError> {
    let bad = |msg: String| LoadError::Field { path: path.to_string(), source: Error::Invalid(msg) };
    match spec {
        MapSpec::Table(rows) => {
            if rows.len() != ground.len() {
                return Err(bad(format!("table has {} rows for {} ground points", rows.len(), ground.len())));
            }
            let values = rows
                .iter()
                .enumerate()
                .map(|(i, r)| match r {
                    None => Ok(ExtValue::PlusInf),
                    Some(v) if v.len() == dim => Ok(ExtValue::Finite(v.clone())),
                    Some(v) => Err(bad(format!("row {i} has length {}, expected {dim}", v.len()))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            VectorMap::new(dim, values).map_err(field(path))
        }
        MapSpec::Poly(coeffs) => {
            if ground.dim() != 1 {
                return Err(bad("poly maps need a one-dimensional ground set".into()));
            }
            if coeffs.len() != dim {
                return Err(bad(format!("{} components, expected {dim}", coeffs.len())));
            }
            VectorMap::from_fn(ground, dim, |x| coeffs.iter().map(|c| c.iter().rev().fold(0.0, |acc, a| acc * x[0] + a)).collect())
                .map_err(field(path))
        }
        MapSpec::Affine { offset, matrix } => {
            if offset.len() != dim || matrix.len() != dim || matrix.iter().any(|r| r.len() != ground.dim()) {
                return Err(bad(format!("affine map must be {dim} x {}", ground.dim())));
            }
            VectorMap::from_fn(ground, dim, |x| {
                offset.iter().zip(matrix).map(|(o, r)| o + r.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()).collect()
            })
            .map_err(field(path))
        }
    }
}

fn build_operator(rows: &[Vec<f64>], m: usize, n: usize, path: &str) -> Result<LinearOperator, LoadError> {
    if rows.len() != m || rows.iter().any(|r| r.len() != n) {
        return Err(LoadError::Field { path: path.into(), source: Error::OperatorShape { expected: m * n, found: rows.iter().map(Vec::len).sum() } });
    }
    LinearOperator::new(m, n, rows.concat()).map_err(field(path))
}

impl InstanceFile {
    pub fn build(&self) -> Result<LoadedInstance, LoadError> {
        let Dims { n, m, p } = self.dims;
        let ground = match &self.ground {
            GroundSpec::Interval { lower, upper, count } => GroundSet::interval(*lower, *upper, *count),
            GroundSpec::Points(pts) => GroundSet::new(pts.clone()),
        }
        .map_err(field("ground"))?;
        if ground.dim() != n {
            return Err(LoadError::Field { path: "ground".into(), source: Error::Dimension { what: "ground point", expected: n, found: ground.dim() } });
        }
        let k_cone = PolyhedralCone::new(self.cone_k.normals.clone(), self.cone_k.generators.clone()).map_err(cone_field("cone_k"))?;
        let s_cone = PolyhedralCone::new(self.cone_s.normals.clone(), self.cone_s.generators.clone()).map_err(cone_field("cone_s"))?;
        if k_cone.dim() != m {
            return Err(LoadError::Field { path: "cone_k".into(), source: Error::Dimension { what: "cone K", expected: m, found: k_cone.dim() } });
        }
        if s_cone.dim() != p {
            return Err(LoadError::Field { path: "cone_s".into(), source: Error::Dimension { what: "cone S", expected: p, found: s_cone.dim() } });
        }
        let direction = Direction::new(&k_cone, self.direction.clone()).map_err(cone_field("direction"))?;
        let c_mask = match &self.constraint_set {
            ConstraintSpec::All => vec![true; ground.len()],
            ConstraintSpec::Mask(mask) => mask.clone(),
            ConstraintSpec::Box { lower, upper } => {
                if lower.len() != n || upper.len() != n {
                    return Err(LoadError::Field { path: "constraint_set.box".into(), source: Error::Dimension { what: "box bound", expected: n, found: lower.len() } });
                }
                ground.points().iter().map(|x| x.iter().enumerate().all(|(d, v)| *v >= lower[d] && *v <= upper[d])).collect()
            }
        };
        if !c_mask.iter().any(|b| *b) {
            return Err(LoadError::Field { path: "constraint_set".into(), source: Error::EmptyMask });
        }
        let f = build_map(&self.objective, &ground, m, "objective")?;
        let family = match &self.declarations.concave_in_u {
            Some(spec) => {
                let base = build_map(&spec.base, &ground, p, "declarations.concave_in_u.base")?;
                let slopes = spec
                    .slopes
                    .iter()
                    .enumerate()
                    .map(|(i, s)| build_map(s, &ground, p, &format!("declarations.concave_in_u.slopes[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                Some(AffineFamily::new(base, slopes).map_err(field("declarations.concave_in_u"))?)
            }
            None => None,
        };
        let mut scenarios = Vec::with_capacity(self.scenarios.len());
        for (i, s) in self.scenarios.iter().enumerate() {
            let path = format!("scenarios[{i}]");
            let g = match (&s.g, &family) {
                (Some(spec), _) => build_map(spec, &ground, p, &format!("{path}.g"))?,
                (None, Some(fam)) => fam.eval(&s.param).map_err(field(format!("{path}.param")))?,
                (None, None) => {
                    return Err(LoadError::Field { path: format!("{path}.g"), source: Error::Invalid("missing and no declared family to generate it".into()) })
                }
            };
            let label = s.label.clone().unwrap_or_else(|| format!("u={:?}", s.param));
            scenarios.push(Scenario { label, param: s.param.clone(), g });
        }
        let declarations = Declarations { convex_regime: self.declarations.convex_regime, compact_u: self.declarations.compact_u, concave_in_u: family };
        let instance = RobustInstance::new(ground, c_mask, f, k_cone, s_cone, scenarios, direction, declarations).map_err(|e| {
            let path = match e {
                Error::EmptyFeasibleSet => "constraint_set",
                Error::NoScenarios => "scenarios",
                Error::Invalid(_) => "declarations.concave_in_u",
                _ => "instance",
            };
            LoadError::Field { path: path.into(), source: e }
        })?;
        if let Some(r) = self.grids.refine {
            if !(r.step.is_finite() && r.step > 0.0) {
                return Err(LoadError::Field { path: "grids.refine.step".into(), source: Error::Invalid("step must be positive".into()) });
            }
        }
        let extra_operators = self
            .grids
            .extra_operators
            .iter()
            .enumerate()
            .map(|(i, rows)| build_operator(rows, m, p, &format!("grids.extra_operators[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LoadedInstance {
            name: self.name.clone(),
            instance,
            extra_operators,
            dual_resolution: self.grids.dual_resolution,
            refine: self.grids.refine,
            tolerances: self.tolerances,
        })
    }
}

pub fn parse_instance(text: &str) -> Result<LoadedInstance, LoadError> {
    parse::<InstanceFile>(text)?.build()
}

pub fn load(path: impl AsRef<Path>) -> Result<LoadedInstance, LoadError> {
    parse_instance(&read(path.as_ref())?)
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub op: Vec<Vec<f64>>,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeFile {
    pub probes: Vec<ProbeSpec>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationFile {
    pub perturbations: Vec<Vec<Vec<f64>>>,
}

pub fn parse_probes(text: &str, inst: &RobustInstance) -> Result<Vec<EpiPoint>, LoadError> {
    let file: ProbeFile = parse(text)?;
    file.probes
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let op = build_operator(&p.op, inst.m(), inst.n(), &format!("probes[{i}].op"))?;
            EpiPoint::new(op, p.y.clone()).map_err(field(format!("probes[{i}].y")))
        })
        .collect()
}

pub fn load_probes(path: impl AsRef<Path>, inst: &RobustInstance) -> Result<Vec<EpiPoint>, LoadError> {
    parse_probes(&read(path.as_ref())?, inst)
}

pub fn parse_perturbations(text: &str, inst: &RobustInstance) -> Result<Vec<LinearOperator>, LoadError> {
    let file: PerturbationFile = parse(text)?;
    file.perturbations
        .iter()
        .enumerate()
        .map(|(i, rows)| build_operator(rows, inst.m(), inst.n(), &format!("perturbations[{i}]")))
        .collect()
}

pub fn load_perturbations(path: impl AsRef<Path>, inst: &RobustInstance) -> Result<Vec<LinearOperator>, LoadError> {
    parse_perturbations(&read(path.as_ref())?, inst)
}
