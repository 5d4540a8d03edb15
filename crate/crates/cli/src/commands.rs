use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use robust_duality::cones::{sample_dual_cone, PolyhedralCone};
use robust_duality::conjugate::{epi_conjugate_contains, indicator, EpiPoint, GroundSet, LinearOperator, VectorMap};
use robust_duality::duality::{
    check_scalar_slater, solve_dual, solve_primal, solve_scalar_duals, stable_sweep, verify_duality, DualGrids, DualPoint, DualPointCertificate,
    ScalarDualityReport, ScalarRobustProgram, ScalarVariant, SlaterVariant, Variant,
};
use robust_duality::farkas::{check_h1, check_slater, farkas_equivalence_report, h1_pairs, H1Verdict, RobustInstance, StatementResult};
use robust_duality::instance::{load_perturbations, load_probes};
use robust_duality::sectional::{is_sectionally_convex, ProbePlan, SectionalVerdict};

use crate::report::{csv_rows, jnum, num, vec, CliError, Output, Source};
use crate::VariantArg;

const H1_PAIRS: usize = 200;

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn point(inst: &RobustInstance, x: usize) -> Vec<f64> {
    inst.ground.point(x).to_vec()
}

fn perturbations_or_zero(inst: &RobustInstance, path: Option<&Path>) -> Result<Vec<LinearOperator>, CliError> {
    Ok(match path {
        Some(p) => load_perturbations(p, inst)?,
        None => vec![LinearOperator::zeros(inst.m(), inst.n())],
    })
}

fn vector_variant(v: VariantArg) -> Option<Variant> {
    match v {
        VariantArg::Rvd => Some(Variant::Rvd),
        VariantArg::Rvdw => Some(Variant::RvdW),
        VariantArg::Rvdk => Some(Variant::RvdK),
        _ => None,
    }
}

fn scalar_variant(v: VariantArg) -> Option<ScalarVariant> {
    match v {
        VariantArg::Rcd1 => Some(ScalarVariant::Rcd1),
        VariantArg::Rcd2 => Some(ScalarVariant::Rcd2),
        VariantArg::Rcd3 => Some(ScalarVariant::Rcd3),
        VariantArg::Rcd4 => Some(ScalarVariant::Rcd4),
        _ => None,
    }
}

fn scalar_program(inst: &RobustInstance) -> Result<ScalarRobustProgram, CliError> {
    ScalarRobustProgram::from_instance(inst).map_err(|e| CliError::Usage(format!("scalar variants need a scalar instance: {e}")))
}

pub fn wsup(path: &Path, probes: Option<&Path>, perturbations: Option<&Path>) -> Result<Output, CliError> {
    let src = Source::read(path)?;
    let inst = &src.loaded.instance;
    let ls = perturbations_or_zero(inst, perturbations)?;
    let probes = probes.map(|p| load_probes(p, inst)).transpose()?.unwrap_or_default();
    let mut text = src.header("wsup");
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for (i, l) in ls.iter().enumerate() {
        let primal = solve_primal(inst, l)?;
        let set = primal.value_set(&inst.k_cone)?;
        let listing = |idx: &[usize]| -> Vec<Value> { idx.iter().map(|&j| json!({ "x": point(inst, primal.feasible[j]), "value": primal.values[j] })).collect() };
        let wmax = set.wmax_indices();
        let _ = writeln!(text, "perturbation {i} L={}: {} feasible values, {} weak minima, {} weak maxima", vec(l.data()), primal.values.len(), primal.wmin.len(), wmax.len());
        for (kind, idx) in [("wmin", &primal.wmin), ("wmax", &wmax)] {
            for &j in idx {
                let x = point(inst, primal.feasible[j]);
                let _ = writeln!(text, "  {kind} x={} value={}", vec(&x), vec(&primal.values[j]));
                rows.push(vec![i.to_string(), kind.into(), vec(&x), vec(&primal.values[j]), String::new()]);
            }
        }
        let mut classes = Vec::new();
        for (pi, p) in probes.iter().enumerate() {
            let class = set.decomposition_class(&p.y).map_err(robust_duality::Error::from)?;
            let in_wsup = set.wsup_contains(&p.y).map_err(robust_duality::Error::from)?;
            let in_winf = set.winf_contains(&p.y).map_err(robust_duality::Error::from)?;
            let _ = writeln!(text, "  probe {pi} y={}: {class:?}, wsup {in_wsup}, winf {in_winf}", vec(&p.y));
            rows.push(vec![i.to_string(), "probe".into(), String::new(), vec(&p.y), format!("{class:?}")]);
            classes.push(json!({ "y": p.y, "class": format!("{class:?}"), "in_wsup": in_wsup, "in_winf": in_winf }));
        }
        if primal.possibly_unbounded {
            let _ = writeln!(text, "  warning: values still decrease at the edge of the ground set");
        }
        results.push(json!({
            "perturbation": l.data(),
            "feasible": primal.values.len(),
            "wmin": listing(&primal.wmin),
            "wmax": listing(&wmax),
            "possibly_unbounded": primal.possibly_unbounded,
            "probes": classes,
        }));
    }
    Ok(Output {
        json: json!({ "command": "wsup", "instance": src.echo(), "results": results }),
        text,
        csv: Some(csv_rows(&["perturbation", "kind", "x", "value", "class"], &rows)),
    })
}

fn status(s: StatementResult) -> &'static str {
    match s {
        StatementResult::True => "true",
        StatementResult::False => "false",
        StatementResult::CertifiedTrue => "certified",
        StatementResult::NotFoundUnderGrid => "not-found",
        StatementResult::Unknown => "unknown",
    }
}

pub fn farkas(path: &Path, probes: &Path) -> Result<Output, CliError> {
    let src = Source::read(path)?;
    let inst = &src.loaded.instance;
    let probes = load_probes(probes, inst)?;
    let tgrid = inst.operator_grid(src.loaded.dual_resolution, &src.loaded.extra_operators);
    let report = farkas_equivalence_report(inst, &probes, &tgrid)?;
    let mut text = src.header("farkas");
    let _ = writeln!(text, "{} probes, operator grid of {}", probes.len(), tgrid.len());
    let mut rows = Vec::new();
    for (i, r) in report.rows.iter().enumerate() {
        let cert = match &r.delta_certificate {
            Some(c) => format!("{} z*={}", c.label, vec(c.zstar.as_slice())),
            None => String::new(),
        };
        let _ = writeln!(
            text,
            "  probe {i}: alpha {} beta {} gamma {} delta {} {cert}",
            status(r.alpha),
            status(r.beta),
            status(r.gamma),
            status(r.delta)
        );
        rows.push(vec![i.to_string(), status(r.alpha).into(), status(r.beta).into(), status(r.gamma).into(), status(r.delta).into(), cert]);
    }
    let s = &report.summary;
    let _ = writeln!(
        text,
        "alpha/delta agree {} of {}; delta without alpha {}; alpha without delta {}; beta not found {}; gamma not found {}; unknown {}",
        s.alpha_delta_agree, s.probes, s.delta_without_alpha, s.alpha_without_delta, s.beta_not_found, s.gamma_not_found, s.unknown
    );
    Ok(Output {
        json: json!({ "command": "farkas", "instance": src.echo(), "grid_size": tgrid.len(), "report": to_json(&report) }),
        text,
        csv: Some(csv_rows(&["probe", "alpha", "beta", "gamma", "delta", "delta_certificate"], &rows)),
    })
}

fn describe(p: &EpiPoint) -> String {
    format!("(L={}, y={})", vec(p.op.data()), vec(&p.y))
}

fn verdict_text(v: &SectionalVerdict) -> String {
    match v {
        SectionalVerdict::Pass { probed, attempts } => format!("Pass: {probed} coset pairs probed ({attempts} draws), no counterexample"),
        SectionalVerdict::Fail { first, second, midpoint } => {
            format!("Fail: {} and {} accepted, midpoint {} rejected", describe(first), describe(second), describe(midpoint))
        }
    }
}

pub fn sectional_counterexample(pairs: usize, seed: u64) -> Result<Output, CliError> {
    let ground = GroundSet::interval(-5.0, 5.0, 21)?;
    let f = VectorMap::constant(ground.len(), vec![0.0, 0.0])?;
    let cone = PolyhedralCone::orthant(2);
    let oracle = |p: &EpiPoint| epi_conjugate_contains(&ground, &f, &cone, p).unwrap_or(false);
    let zero = LinearOperator::zeros(2, 1);
    let mut plan = ProbePlan::new((2, 1), seed, 0);
    plan.seeded.push((EpiPoint::new(zero.clone(), vec![0.0, -1.0])?, EpiPoint::new(zero, vec![-1.0, 0.0])?));
    let tilted = [1.0, -1.0];
    let interior = [1.0, 1.0];
    let seeded = is_sectionally_convex(oracle, &tilted, &plan)?;
    let sampled = is_sectionally_convex(oracle, &interior, &ProbePlan::new((2, 1), seed, pairs))?;
    let mut text = String::from("sectional: null map from [-5, 5] (21 points) into R^2, ordered by the nonnegative orthant\n");
    let _ = writeln!(text, "  direction {}: {}", vec(&tilted), verdict_text(&seeded));
    let _ = writeln!(text, "  direction {}: {}", vec(&interior), verdict_text(&sampled));
    Ok(Output {
        json: json!({
            "command": "sectional",
            "seed": seed,
            "counterexample": { "direction": tilted, "verdict": to_json(&seeded) },
            "interior": { "direction": interior, "pairs": pairs, "verdict": to_json(&sampled) },
        }),
        text,
        csv: None,
    })
}

/// `F + I_A`.
fn restricted_objective(inst: &RobustInstance) -> Result<VectorMap, CliError> {
    let feasible = inst.feasible_set();
    let mask: Vec<bool> = (0..inst.ground.len()).map(|x| feasible.contains(&x)).collect();
    Ok(inst.f.add(&indicator(&mask, inst.m())?)?)
}

pub fn sectional(path: &Path, direction: Option<&[f64]>, pairs: usize, seed: u64, probes: Option<&Path>) -> Result<Output, CliError> {
    let src = Source::read(path)?;
    let inst = &src.loaded.instance;
    let fa = restricted_objective(inst)?;
    let k = direction.map_or_else(|| inst.k().to_vec(), <[f64]>::to_vec);
    let oracle = |p: &EpiPoint| epi_conjugate_contains(&inst.ground, &fa, &inst.k_cone, p).unwrap_or(false);
    let verdict = is_sectionally_convex(oracle, &k, &ProbePlan::new((inst.m(), inst.n()), seed, pairs))?;
    let mut text = src.header("sectional");
    let _ = writeln!(text, "  conjugate epigraph of F + I_A along {}: {}", vec(&k), verdict_text(&verdict));
    let mut members = Vec::new();
    for (i, p) in probes.map(|p| load_probes(p, inst)).transpose()?.unwrap_or_default().iter().enumerate() {
        let inside = epi_conjugate_contains(&inst.ground, &fa, &inst.k_cone, p)?;
        let _ = writeln!(text, "  probe {i} {}: {}", describe(p), if inside { "in" } else { "out" });
        members.push(json!({ "probe": to_json(p), "member": inside }));
    }
    Ok(Output {
        json: json!({ "command": "sectional", "instance": src.echo(), "seed": seed, "direction": k, "pairs": pairs, "verdict": to_json(&verdict), "probes": members }),
        text,
        csv: None,
    })
}

fn certificate_text(c: &DualPointCertificate, inst: &RobustInstance) -> String {
    match c {
        DualPointCertificate::Multiplier { scenario, zstar } => format!("{} z*={}", inst.scenarios[*scenario].label, vec(zstar.as_slice())),
        DualPointCertificate::Operator { scenario, op, s } => format!("{} T={} s={}", inst.scenarios[*scenario].label, vec(op.data()), vec(s)),
    }
}

fn dual_point_json(inst: &RobustInstance, p: &DualPoint) -> Value {
    json!({ "value": p.value, "x": point(inst, p.x), "certificate": to_json(&p.certificate) })
}

fn scalar_row_json(r: &ScalarDualityReport) -> Value {
    json!({
        "variant": to_json(&r.variant),
        "xstar": r.xstar,
        "primal": jnum(r.primal),
        "dual": jnum(r.dual),
        "gap": jnum(r.gap()),
        "certificate": to_json(&r.certificate),
        "outer_steps": r.grid_size,
        "notes": r.notes,
    })
}

fn scalar_row_text(r: &ScalarDualityReport) -> String {
    let mut s = format!("{:?} x*={}: primal {} dual {} gap {}", r.variant, vec(&r.xstar), num(r.primal), num(r.dual), num(r.gap()));
    if let Some(c) = &r.certificate {
        let _ = write!(s, " certificate {}", serde_json::to_string(c).expect("certificate serializes"));
    }
    for n in &r.notes {
        let _ = write!(s, " [{n}]");
    }
    s
}

fn scalar_runs(src: &Source, variants: &[ScalarVariant], ls: &[LinearOperator], command: &str) -> Result<Output, CliError> {
    let inst = &src.loaded.instance;
    let prog = scalar_program(inst)?;
    let mut text = src.header(command);
    let mut rows = Vec::new();
    let mut results = Vec::new();
    let mut worst = 0.0f64;
    for l in ls {
        for &v in variants {
            let r = solve_scalar_duals(&prog, l.data(), v)?;
            worst = worst.max(r.gap().abs());
            let _ = writeln!(text, "  {}", scalar_row_text(&r));
            rows.push(vec![format!("{:?}", r.variant), vec(&r.xstar), num(r.primal), num(r.dual), num(r.gap())]);
            results.push(scalar_row_json(&r));
        }
    }
    let _ = writeln!(text, "max |gap| {}", num(worst));
    Ok(Output {
        json: json!({ "command": command, "instance": src.echo(), "results": results, "max_abs_gap": jnum(worst) }),
        text,
        csv: Some(csv_rows(&["variant", "xstar", "primal", "dual", "gap"], &rows)),
    })
}

pub fn solve(path: &Path, variant: VariantArg, tol: Option<f64>) -> Result<Output, CliError> {
    let src = Source::read(path)?;
    let inst = &src.loaded.instance;
    let zero = LinearOperator::zeros(inst.m(), inst.n());
    let Some(v) = vector_variant(variant) else {
        return scalar_runs(&src, &[scalar_variant(variant).expect("scalar variant")], &[zero], "solve");
    };
    let tol = tol.unwrap_or(src.loaded.tolerances.gap);
    let grids = DualGrids::from_loaded(&src.loaded)?;
    let primal = solve_primal(inst, &zero)?;
    let dual = solve_dual(inst, &zero, v, &grids)?;
    let r = verify_duality(inst, &primal, &dual, tol)?;
    let mut seen: Vec<&[f64]> = Vec::new();
    let mut wmax = Vec::new();
    for &i in &dual.wmax {
        let p = &dual.points[i];
        if !seen.contains(&p.value.as_slice()) {
            seen.push(&p.value);
            wmax.push(p);
        }
    }
    let exact = r.dual_in_primal_winf.iter().filter(|b| **b).count();
    let gap = r.max_gap().max(0.0);
    let mut text = src.header("solve");
    let _ = writeln!(text, "variant {v:?}, tolerance {}", num(tol));
    let _ = writeln!(text, "primal: {} feasible values, {} weak minima", primal.values.len(), primal.wmin.len());
    for &j in &primal.wmin {
        let _ = writeln!(text, "  x={} value={}", vec(&point(inst, primal.feasible[j])), vec(&primal.values[j]));
    }
    let _ = writeln!(
        text,
        "dual: grid {}, {} attained points, {} distinct weak maxima, {} discarded certificates{}",
        dual.grid_size,
        dual.points.len(),
        wmax.len(),
        dual.discarded.len(),
        if dual.heuristic { " (sampled inner infimum)" } else { "" }
    );
    for p in &wmax {
        let _ = writeln!(text, "  value={} x={} {}", vec(&p.value), vec(&point(inst, p.x)), certificate_text(&p.certificate, inst));
    }
    let _ = writeln!(text, "weak duality: {} pairs, {} violations", r.pairs_checked, r.weak_violations.len());
    let _ = writeln!(text, "dual weak maxima in primal weak infimum: {exact} of {}", r.dual_in_primal_winf.len());
    let _ = writeln!(text, "gap {} ({})", num(gap), if r.strong_holds() { "strong duality holds" } else { "strong duality not confirmed" });
    if primal.possibly_unbounded {
        let _ = writeln!(text, "warning: primal values still decrease at the edge of the ground set");
    }
    Ok(Output {
        json: json!({
            "command": "solve",
            "instance": src.echo(),
            "variant": to_json(&v),
            "tolerance": tol,
            "primal": {
                "feasible": primal.values.len(),
                "wmin": primal.wmin.iter().map(|&j| json!({ "x": point(inst, primal.feasible[j]), "value": primal.values[j] })).collect::<Vec<_>>(),
                "possibly_unbounded": primal.possibly_unbounded,
            },
            "dual": {
                "grid_size": dual.grid_size,
                "attained": dual.points.len(),
                "heuristic": dual.heuristic,
                "wmax": wmax.iter().map(|p| dual_point_json(inst, p)).collect::<Vec<_>>(),
                "discarded": to_json(&dual.discarded),
            },
            "weak": { "pairs": r.pairs_checked, "violations": r.weak_violations.len() },
            "exact_direction": { "checked": r.dual_in_primal_winf.len(), "passed": exact },
            "gap": jnum(gap),
            "strong": r.strong_holds(),
        }),
        text,
        csv: None,
    })
}

pub fn sweep(path: &Path, perturbations: &Path, variant: VariantArg, tol: Option<f64>) -> Result<Output, CliError> {
    let src = Source::read(path)?;
    let inst = &src.loaded.instance;
    let ls = load_perturbations(perturbations, inst)?;
    let Some(v) = vector_variant(variant) else {
        return scalar_runs(&src, &[scalar_variant(variant).expect("scalar variant")], &ls, "sweep");
    };
    let tol = tol.unwrap_or(src.loaded.tolerances.gap);
    let grids = DualGrids::from_loaded(&src.loaded)?;
    let (reports, summary) = stable_sweep(inst, &ls, v, &grids, tol)?;
    let mut text = src.header("sweep");
    let _ = writeln!(text, "variant {v:?}, tolerance {}, {} perturbations", num(tol), ls.len());
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        let exact = r.dual_in_primal_winf.iter().filter(|b| **b).count();
        let gap = r.max_gap();
        let _ = writeln!(
            text,
            "  {i} L={}: weak violations {}, exact {exact}/{}, gap {}, {}{}",
            vec(r.primal.perturbation.data()),
            r.weak_violations.len(),
            r.dual_in_primal_winf.len(),
            num(gap),
            if r.strong_holds() { "strong" } else { "not confirmed" },
            if r.primal.possibly_unbounded { ", possibly unbounded" } else { "" }
        );
        rows.push(vec![
            i.to_string(),
            vec(r.primal.perturbation.data()),
            r.weak_violations.len().to_string(),
            exact.to_string(),
            r.dual_in_primal_winf.len().to_string(),
            num(gap),
            r.primal.possibly_unbounded.to_string(),
            r.strong_holds().to_string(),
        ]);
        results.push(json!({
            "perturbation": r.primal.perturbation.data(),
            "weak_violations": r.weak_violations.len(),
            "pairs": r.pairs_checked,
            "exact_passed": exact,
            "exact_checked": r.dual_in_primal_winf.len(),
            "gap": jnum(gap),
            "possibly_unbounded": r.primal.possibly_unbounded,
            "strong": r.strong_holds(),
        }));
    }
    let _ = writeln!(
        text,
        "weak failures {}, strong failures {}, flagged unbounded {}, max gap {}",
        summary.weak_failures,
        summary.strong_failures,
        summary.flagged_unbounded,
        num(summary.max_gap)
    );
    Ok(Output {
        json: json!({ "command": "sweep", "instance": src.echo(), "variant": to_json(&v), "tolerance": tol, "results": results, "summary": {
            "perturbations": summary.perturbations,
            "weak_failures": summary.weak_failures,
            "strong_failures": summary.strong_failures,
            "flagged_unbounded": summary.flagged_unbounded,
            "max_gap": jnum(summary.max_gap),
        } }),
        text,
        csv: Some(csv_rows(&["index", "perturbation", "weak_violations", "exact_passed", "exact_checked", "gap", "possibly_unbounded", "strong"], &rows)),
    })
}

pub fn check(path: &Path, seed: u64) -> Result<Output, CliError> {
    let src = Source::read(path)?;
    let inst = &src.loaded.instance;
    let mut text = src.header("check");
    let _ = writeln!(text, "dims n={} m={} p={}; cones K ({} normals) and S ({} normals) validated", inst.n(), inst.m(), inst.p(), inst.k_cone.normals().len(), inst.s_cone.normals().len());
    let feasible = inst.feasible_set();
    let _ = writeln!(text, "robust feasible points: {} of {}", feasible.len(), inst.ground.len());
    let slater = check_slater(inst);
    let mut witnesses = Vec::new();
    for (s, w) in inst.scenarios.iter().zip(&slater.witnesses) {
        match w {
            Some(x) => {
                let g = s.g.get(*x).expect("witness in domain");
                let _ = writeln!(text, "  slater {}: x={} G={}", s.label, vec(inst.ground.point(*x)), vec(g));
                witnesses.push(json!({ "scenario": s.label, "x": point(inst, *x), "g": g }));
            }
            None => {
                let _ = writeln!(text, "  slater {}: no strictly feasible point", s.label);
                witnesses.push(json!({ "scenario": s.label, "x": null }));
            }
        }
    }
    let _ = writeln!(text, "slater: {}", if slater.holds() { "holds" } else { "fails" });
    let zgrid = sample_dual_cone(&inst.s_cone, src.loaded.dual_resolution);
    let h1 = check_h1(inst, &h1_pairs(inst, &zgrid, H1_PAIRS, seed))?;
    match &h1 {
        H1Verdict::Pass { checked, .. } => {
            let _ = writeln!(text, "uniform concavity: holds on {checked} sampled pairs");
        }
        H1Verdict::Fail { pair } => {
            let _ = writeln!(text, "uniform concavity: fails for pair {}", serde_json::to_string(pair).expect("pair serializes"));
        }
    }
    let mut scalar = Value::Null;
    if inst.m() == 1 {
        if let Ok(prog) = ScalarRobustProgram::from_instance(inst) {
            let mut per = serde_json::Map::new();
            for v in [SlaterVariant::PerSelection, SlaterVariant::PerIndex, SlaterVariant::PerSelectionMax] {
                let r = check_scalar_slater(&prog, v);
                let _ = writeln!(text, "scalar slater {v:?}: {}", if r.holds() { "holds" } else { "fails" });
                per.insert(format!("{v:?}"), json!({ "holds": r.holds(), "witnesses": r.witnesses.iter().map(|w| w.map(|x| point(inst, x))).collect::<Vec<_>>() }));
            }
            scalar = Value::Object(per);
        }
    }
    Ok(Output {
        json: json!({
            "command": "check",
            "instance": src.echo(),
            "seed": seed,
            "dims": { "n": inst.n(), "m": inst.m(), "p": inst.p() },
            "feasible": feasible.len(),
            "slater": { "holds": slater.holds(), "witnesses": witnesses },
            "h1": { "passed": h1.passed(), "pairs": H1_PAIRS, "verdict": to_json(&h1) },
            "scalar_slater": scalar,
        }),
        text,
        csv: None,
    })
}

pub fn gap(path: &Path, variant: Option<VariantArg>, perturbations: Option<&Path>) -> Result<Output, CliError> {
    let src = Source::read(path)?;
    let variants = match variant {
        None => vec![ScalarVariant::Rcd1, ScalarVariant::Rcd2, ScalarVariant::Rcd3, ScalarVariant::Rcd4],
        Some(v) => vec![scalar_variant(v).ok_or_else(|| CliError::Usage("gap takes one of rcd1..rcd4".into()))?],
    };
    let ls = perturbations_or_zero(&src.loaded.instance, perturbations)?;
    scalar_runs(&src, &variants, &ls, "gap")
}
