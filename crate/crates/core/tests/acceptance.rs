//! Acceptance criteria. Each prints one PASS/FAIL line; tolerances and
//! runtime budgets are pinned below.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use robust_duality::cones::{Direction, PolyhedralCone};
use robust_duality::conjugate::{epi_conjugate_contains, indicator, EpiPoint, ExtValue, GroundSet, LinearOperator, VectorMap};
use robust_duality::duality::{
    check_scalar_slater, s_ladder, solve_dual, solve_dual_weak, solve_primal, solve_scalar_duals, verify_duality, DualGrids, ScalarRobustProgram,
    ScalarVariant, SlaterVariant, Variant,
};
use robust_duality::farkas::{
    beta_holds, check_h1, check_slater, gamma_check, h1_pairs, qualifying_section_floor, statement_alpha, statement_delta_certify, Declarations,
    Membership, RobustInstance, Scenario,
};
use robust_duality::instance::{load, load_perturbations, LoadedInstance};
use robust_duality::order::{Class, FiniteValueSet};
use robust_duality::sectional::{is_sectionally_convex, lift, sectional_closure_contains, ProbePlan, SectionCoord, SectionalVerdict, COSET_TOL};

const THRESHOLD_BAND: f64 = 1e-9;
const PARTITION_TIE: f64 = 1e-12;
const SCALAR_GAP: f64 = 1e-6;
const CLOSURE_EPS: f64 = 1e-3;
const VECTOR_GAP: f64 = 1e-3;
const VECTOR_RESOLUTION: usize = 20;

const VECTOR_INSTANCES: [&str; 5] = ["tradeoff_orthant.json", "sheared_cone.json", "two_constraints.json", "steep_direction.json", "generated_cone.json"];

fn instances_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

fn bundled(name: &str) -> LoadedInstance {
    load(instances_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn ep(op: &[f64], rows: usize, y: &[f64]) -> EpiPoint {
    EpiPoint::new(LinearOperator::new(rows, op.len() / rows, op.to_vec()).unwrap(), y.to_vec()).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Null map on a grid of R into R², ordered by R²₊.
fn null_map_oracle() -> impl Fn(&EpiPoint) -> bool {
    let x = GroundSet::interval(-5.0, 5.0, 41).unwrap();
    let f = VectorMap::constant(x.len(), vec![0.0, 0.0]).unwrap();
    let k = PolyhedralCone::orthant(2);
    move |p| epi_conjugate_contains(&x, &f, &k, p).unwrap()
}

fn criterion_1() -> Outcome {
    let oracle = null_map_oracle();
    let mut plan = ProbePlan::new((2, 1), 1, 0);
    let first = ep(&[0.0, 0.0], 2, &[0.0, -1.0]);
    let second = ep(&[0.0, 0.0], 2, &[-1.0, 0.0]);
    plan.seeded.push((first.clone(), second.clone()));
    let witness = match is_sectionally_convex(&oracle, &[1.0, -1.0], &plan).unwrap() {
        SectionalVerdict::Fail { first: a, second: b, midpoint } => a == first && b == second && midpoint.y == vec![-0.5, -0.5] && midpoint.op.is_zero(),
        SectionalVerdict::Pass { .. } => false,
    };
    let inside = is_sectionally_convex(&oracle, &[1.0, 1.0], &ProbePlan::new((2, 1), 2024, 1000)).unwrap();
    let probed = match inside {
        SectionalVerdict::Pass { probed, .. } => probed,
        SectionalVerdict::Fail { .. } => 0,
    };
    outcome(witness && probed == 1000, format!("k=(1,-1) midpoint y1=-0.5 rejected: {witness}; k=(1,1) pairs without counterexample: {probed}/1000"))
}

/// Random simplicial cone given by its generators, with normals built
/// from them independently of the library.
fn simplicial_cone(rng: &mut ChaCha8Rng, m: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    loop {
        let gens: Vec<Vec<f64>> = if m == 2 {
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            let b = a + rng.gen_range(0.2..std::f64::consts::PI - 0.2);
            vec![vec![a.cos(), a.sin()], vec![b.cos(), b.sin()]]
        } else {
            (0..3).map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()
        };
        if det(&gens).abs() < 0.1 {
            continue;
        }
        let normals: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let raw = if m == 2 {
                    let o = &gens[1 - i];
                    vec![-o[1], o[0]]
                } else {
                    let (a, b) = (&gens[(i + 1) % 3], &gens[(i + 2) % 3]);
                    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
                };
                let s = raw.iter().zip(&gens[i]).map(|(x, y)| x * y).sum::<f64>().signum();
                raw.iter().map(|v| v * s).collect()
            })
            .collect();
        return (normals, gens);
    }
}

fn det(rows: &[Vec<f64>]) -> f64 {
    match rows.len() {
        2 => rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0],
        _ => {
            let r = rows;
            r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
        }
    }
}

/// Coordinates of `v` in the generator basis, by Cramer's rule.
fn generator_coords(gens: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    let m = gens.len();
    let cols: Vec<Vec<f64>> = (0..m).map(|r| (0..m).map(|c| gens[c][r]).collect()).collect();
    let d = det(&cols);
    (0..m)
        .map(|j| {
            let swapped: Vec<Vec<f64>> = cols.iter().enumerate().map(|(r, row)| row.iter().enumerate().map(|(c, x)| if c == j { v[r] } else { *x }).collect()).collect();
            det(&swapped) / d
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut checked, mut disagreements) = (0usize, 0usize);
    for trial in 0..1000 {
        let m = if trial % 2 == 0 { 2 } else { 3 };
        let (normals, gens) = simplicial_cone(&mut rng, m);
        let cone = PolyhedralCone::new(normals, gens.clone()).unwrap();
        let weights: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..1.0)).collect();
        let k: Vec<f64> = (0..m).map(|r| gens.iter().zip(&weights).map(|(g, w)| g[r] * w).sum()).collect();
        let y: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let alpha_bar = robust_duality::cones::threshold_alpha(&cone, &y, &Direction::new(&cone, k.clone()).unwrap()).unwrap();
        for i in 0..400 {
            let alpha = alpha_bar - 2.0 + 4.0 * i as f64 / 399.0;
            if (alpha - alpha_bar).abs() < THRESHOLD_BAND {
                continue;
            }
            let w: Vec<f64> = y.iter().zip(&k).map(|(a, b)| -(a + alpha * b)).collect();
            let in_neg_interior = generator_coords(&gens, &w).iter().all(|c| *c > 0.0);
            checked += 1;
            if in_neg_interior != (alpha < alpha_bar) {
                disagreements += 1;
            }
        }
    }
    outcome(disagreements == 0, format!("{checked} scan points, {disagreements} disagreements outside |a - abar| < {THRESHOLD_BAND:e}"))
}

fn small_int_cones() -> Vec<PolyhedralCone> {
    vec![
        PolyhedralCone::orthant(2),
        PolyhedralCone::new(vec![vec![1.0, 0.0], vec![1.0, 1.0]], vec![vec![0.0, 1.0], vec![1.0, -1.0]]).unwrap(),
        PolyhedralCone::new(vec![vec![-1.0, 2.0], vec![2.0, -1.0]], vec![vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap(),
    ]
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cones = small_int_cones();
    let (mut double, mut orphan, mut oracle_mismatch) = (0, 0, 0);
    let mut counts = [0usize; 3];
    for _ in 0..10_000 {
        let cone = &cones[rng.gen_range(0..cones.len())];
        let size = rng.gen_range(1..=6);
        let pts: Vec<Vec<f64>> = (0..size).map(|_| (0..2).map(|_| rng.gen_range(-3..=3) as f64).collect()).collect();
        let v: Vec<f64> = (0..2).map(|_| rng.gen_range(-3..=3) as f64).collect();
        let set = FiniteValueSet::new(cone, pts.clone()).unwrap();
        let k = cone.interior_point();
        // t₀ = least t with v ≤ y + t·k for some y ∈ M.
        let t0 = pts
            .iter()
            .map(|y| cone.normals().iter().map(|a| a.iter().zip(v.iter().zip(y)).map(|(ai, (vi, yi))| ai * (vi - yi)).sum::<f64>() / a.iter().zip(&k).map(|(x, y)| x * y).sum::<f64>()).fold(f64::NEG_INFINITY, f64::max))
            .fold(f64::INFINITY, f64::min);
        let expected = if t0 < -PARTITION_TIE {
            Class::Below
        } else if t0 <= PARTITION_TIE {
            Class::Frontier
        } else {
            Class::Above
        };
        let below = pts.iter().any(|y| cone.in_interior(&[y[0] - v[0], y[1] - v[1]]));
        let frontier = set.wsup_contains(&v).unwrap();
        let above = !pts.iter().any(|y| cone.contains(&[y[0] - v[0], y[1] - v[1]]));
        match [below, frontier, above].iter().filter(|b| **b).count() {
            0 => orphan += 1,
            1 => {}
            _ => double += 1,
        }
        let class = set.decomposition_class(&v).unwrap();
        counts[class as usize] += 1;
        if class != expected {
            oracle_mismatch += 1;
        }
    }
    outcome(
        double == 0 && orphan == 0 && oracle_mismatch == 0,
        format!("10000 partitions (below/frontier/above = {:?}), double {double}, orphan {orphan}, t0-oracle mismatches {oracle_mismatch}", counts),
    )
}

/// Random instance with n = 1, m = 2, p = 1, |C| ≤ 8, |U| ≤ 3.
fn random_instance(rng: &mut ChaCha8Rng) -> RobustInstance {
    loop {
        let (normals, gens) = simplicial_cone(rng, 2);
        let k_cone = PolyhedralCone::new(normals, gens.clone()).unwrap();
        let (c0, c1) = (rng.gen_range(0.3..1.0), rng.gen_range(0.3..1.0));
        let k: Vec<f64> = (0..2).map(|r| gens[0][r] * c0 + gens[1][r] * c1).collect();
        let direction = Direction::new(&k_cone, k).unwrap();
        let mut pts: Vec<f64> = (0..rng.gen_range(2..=8)).map(|_| (rng.gen_range(-2.0..2.0_f64) * 100.0).round() / 100.0).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let n = pts.len();
        let ground = GroundSet::new(pts.into_iter().map(|x| vec![x]).collect()).unwrap();
        let c_mask: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.8)).collect();
        let f = VectorMap::new(2, (0..n).map(|_| ExtValue::Finite(vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)])).collect()).unwrap();
        let safe = rng.gen_range(0..n);
        let scenarios = (0..rng.gen_range(1..=3))
            .map(|u| {
                let g = (0..n).map(|x| ExtValue::Finite(vec![if x == safe { -rng.gen_range(0.1..1.0) } else { rng.gen_range(-1.0..1.0) }])).collect();
                Scenario { label: format!("u{u}"), param: vec![u as f64], g: VectorMap::new(1, g).unwrap() }
            })
            .collect();
        if let Ok(inst) = RobustInstance::new(ground, c_mask, f, k_cone, PolyhedralCone::orthant(1), scenarios, direction, Declarations::default()) {
            return inst;
        }
    }
}

/// Half the probes are placed above the A_k floor of their section.
fn random_probes(rng: &mut ChaCha8Rng, inst: &RobustInstance, count: usize) -> Vec<EpiPoint> {
    (0..count)
        .map(|i| {
            let op: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..2).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let base = ep(&op, 2, &y);
            if i % 2 == 0 {
                return base;
            }
            let floor = qualifying_section_floor(inst, &base, &[0.0]).unwrap();
            if !floor.is_finite() {
                return base;
            }
            lift(&base, inst.k(), &SectionCoord { xstar: vec![0.0], r: floor + rng.gen_range(0.0..1.0) })
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut certified, mut violations) = (0, 0);
    for _ in 0..50 {
        let inst = random_instance(&mut rng);
        for p in random_probes(&mut rng, &inst, 20) {
            let Some(cert) = statement_delta_certify(&inst, &p).unwrap() else { continue };
            certified += 1;
            let t = LinearOperator::rank_one(inst.k(), &cert.zstar);
            let beta = beta_holds(&inst, &p, cert.scenario, &t);
            let gamma = gamma_check(&inst, &p, cert.scenario, &t).unwrap() == Membership::In;
            let alpha = statement_alpha(&inst, &p).unwrap();
            if !(beta && gamma && alpha) {
                violations += 1;
            }
        }
    }
    outcome(violations == 0 && certified > 0, format!("1000 probes, {certified} A_k-certified, {violations} chain violations"))
}

fn perturbations(rng: &mut ChaCha8Rng, inst: &RobustInstance, count: usize) -> Vec<LinearOperator> {
    let mut out = vec![LinearOperator::zeros(inst.m(), inst.n())];
    for _ in 1..count {
        out.push(LinearOperator::new(inst.m(), inst.n(), (0..inst.m() * inst.n()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap());
    }
    out
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut pairs, mut violations, mut reports) = (0usize, 0usize, 0usize);
    for name in VECTOR_INSTANCES.iter().chain(&["robust_lp.json"]) {
        let li = bundled(name);
        let inst = &li.instance;
        let grids = DualGrids::from_loaded(&li).unwrap();
        // Weakly positive operators that are not positive exercise the s-samples.
        let mut weak_grid = grids.tgrid.clone();
        if inst.m() == 2 {
            for data in [[1.0, -0.5], [-0.5, 1.0], [2.0, -1.0]] {
                weak_grid.push(LinearOperator::new(2, inst.p(), data.iter().flat_map(|v| std::iter::repeat(*v).take(inst.p())).collect()).unwrap());
            }
        }
        for l in perturbations(&mut rng, inst, 3) {
            let primal = solve_primal(inst, &l).unwrap();
            let duals = [
                solve_dual(inst, &l, Variant::RvdK, &grids).unwrap(),
                solve_dual(inst, &l, Variant::Rvd, &grids).unwrap(),
                solve_dual_weak(inst, &l, &weak_grid, &s_ladder(&inst.s_cone)).unwrap(),
            ];
            for d in &duals {
                let r = verify_duality(inst, &primal, d, VECTOR_GAP).unwrap();
                pairs += r.pairs_checked;
                violations += r.weak_violations.len();
                reports += 1;
            }
        }
        if inst.m() == 1 {
            let prog = ScalarRobustProgram::from_instance(inst).unwrap();
            for xs in [-1.0, 0.0, 1.0] {
                for v in [ScalarVariant::Rcd1, ScalarVariant::Rcd2, ScalarVariant::Rcd3, ScalarVariant::Rcd4] {
                    let r = solve_scalar_duals(&prog, &[xs], v).unwrap();
                    pairs += prog.feasible().len();
                    if r.dual > r.primal + SCALAR_GAP {
                        violations += 1;
                    }
                    reports += 1;
                }
            }
        }
    }
    outcome(violations == 0 && pairs >= 10_000, format!("{reports} dual reports, {pairs} dual x primal pairs, {violations} weak-duality violations"))
}

fn criterion_6() -> Outcome {
    let li = bundled("robust_lp.json");
    let inst = &li.instance;
    let prog = ScalarRobustProgram::from_instance(inst).unwrap();
    let us = prog.families[0].members.len();
    let slater_at_10 = inst.ground.points().iter().position(|x| x[0] == 10.0).is_some_and(|x| prog.families[0].members.iter().all(|g| g[x].unwrap() < 0.0));
    let slater = check_scalar_slater(&prog, SlaterVariant::PerSelection).holds() && slater_at_10;
    let base = solve_scalar_duals(&prog, &[0.0], ScalarVariant::Rcd1).unwrap();
    let base_ok = base.primal == 1.0 && (base.dual - 1.0).abs() <= SCALAR_GAP;
    let v = load_perturbations(instances_dir().join("robust_lp_perturbations.json"), inst).unwrap();
    let worst = v.iter().map(|l| solve_scalar_duals(&prog, l.data(), ScalarVariant::Rcd1).unwrap().gap().abs()).fold(0.0, f64::max);
    let others = [ScalarVariant::Rcd2, ScalarVariant::Rcd3, ScalarVariant::Rcd4]
        .iter()
        .map(|&var| v.iter().map(|l| solve_scalar_duals(&prog, l.data(), var).unwrap().gap().abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    outcome(
        us == 11 && prog.ground.len() == 101 && slater && base_ok && worst <= SCALAR_GAP,
        format!(
            "Slater (x=10): {slater}; primal {} RCD1 {:.12}; max |gap| over x* in {{-1,-0.5,0,0.5,1}}: RCD1 {worst:.2e}, RCD2-4 {others:.2e}",
            base.primal, base.dual
        ),
    )
}

/// `r_epi(x*) = max over x ∈ A ∩ dom F of ᾱ(y₀ − L₀x + F(x)) + x*·x`, the
/// floor of the section of epi(F + I_A)* through `base`.
fn epi_floor(inst: &RobustInstance, base: &EpiPoint, xstar: f64) -> f64 {
    let k = inst.k();
    inst.feasible_set()
        .into_iter()
        .filter(|&x| inst.f.get(x).is_some())
        .map(|x| {
            let w = inst.residual(base, x);
            let alpha = inst.k_cone.normals().iter().map(|a| -dot(a, &w) / dot(a, k)).fold(f64::INFINITY, f64::min);
            alpha + xstar * inst.ground.point(x)[0]
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut probes, mut misses, mut cloud_points, mut cloud_rejects) = (0, 0, 0, 0);
    for name in VECTOR_INSTANCES {
        let li = bundled(name);
        let inst = &li.instance;
        let feasible = inst.feasible_set();
        let mask: Vec<bool> = (0..inst.ground.len()).map(|x| feasible.contains(&x)).collect();
        let fa = inst.f.add(&indicator(&mask, inst.m()).unwrap()).unwrap();
        for base in [ep(&[0.0, 0.0], 2, &[0.0, 0.0]), ep(&[0.3, -0.2], 2, &[0.5, -0.25])] {
            let mut cloud = Vec::new();
            for j in 0..=240 {
                let xs = -1.2 + 0.01 * j as f64;
                let floor = qualifying_section_floor(inst, &base, &[xs]).unwrap();
                if !floor.is_finite() {
                    continue;
                }
                for r in [floor, floor + 3.0] {
                    let q = lift(&base, inst.k(), &SectionCoord { xstar: vec![xs], r });
                    cloud_points += 1;
                    if !epi_conjugate_contains(&inst.ground, &fa, &inst.k_cone, &q).unwrap() {
                        cloud_rejects += 1;
                    }
                    cloud.push(q);
                }
            }
            for i in 0..60 {
                let xs = rng.gen_range(-1.0..1.0);
                let r = epi_floor(inst, &base, xs) + if i % 3 == 0 { 0.0 } else { rng.gen_range(0.0..2.0) };
                let q = lift(&base, inst.k(), &SectionCoord { xstar: vec![xs], r });
                probes += 1;
                if !sectional_closure_contains(&cloud, inst.k(), &q, COSET_TOL, CLOSURE_EPS).unwrap() {
                    misses += 1;
                }
            }
        }
    }
    outcome(
        misses == 0 && cloud_rejects == 0,
        format!("{probes} epi probes, {misses} outside the eps-closure of the A_k cloud; {cloud_points} A_k points, {cloud_rejects} rejected by exact epi membership"),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut sites, mut disagreements) = (0, 0);
    while sites < 1000 {
        let inst = random_instance(&mut rng);
        for p in random_probes(&mut rng, &inst, 4) {
            for _ in 0..5 {
                let x = rng.gen_range(0..inst.ground.len());
                let u = rng.gen_range(0..inst.scenarios.len());
                let z = rng.gen_range(0.0..3.0);
                let g = inst.scenarios[u].g.get(x).unwrap()[0];
                let w = inst.residual(&p, x);
                let shifted: Vec<f64> = w.iter().zip(inst.k()).map(|(a, b)| a + z * g * b).collect();
                let direct = !inst.k_cone.in_neg_interior(&shifted);
                let scalar = z * g >= inst.k_cone.threshold_alpha(&w, inst.k()).unwrap();
                sites += 1;
                if direct != scalar {
                    disagreements += 1;
                }
            }
        }
    }
    outcome(disagreements == 0, format!("{sites} reduction sites, {disagreements} disagreements"))
}

fn criterion_9() -> Outcome {
    let li = bundled("tradeoff_orthant.json");
    let inst = &li.instance;
    let zgrid = robust_duality::cones::sample_dual_cone(&inst.s_cone, VECTOR_RESOLUTION);
    let h1 = check_h1(inst, &h1_pairs(inst, &zgrid, 200, 9)).unwrap().passed();
    let slater = check_slater(inst).holds();
    let grids = DualGrids::from_instance(inst, VECTOR_RESOLUTION, &li.extra_operators);
    let l = LinearOperator::zeros(2, 1);
    let primal = solve_primal(inst, &l).unwrap();
    let dual = solve_dual(inst, &l, Variant::RvdK, &grids).unwrap();
    let r = verify_duality(inst, &primal, &dual, VECTOR_GAP).unwrap();
    let exact = r.dual_in_primal_winf.iter().filter(|b| **b).count();
    outcome(
        h1 && slater && r.weak_holds() && r.exact_direction_holds() && r.approximate_direction_holds(),
        format!(
            "H1 {h1}, Slater {slater}; {exact}/{} dual wmax points in primal winf; max gap over {} primal wmin points {:.2e} (tol {VECTOR_GAP:e})",
            r.dual_in_primal_winf.len(),
            r.primal_gaps.len(),
            r.max_gap()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("sectional counterexample and interior direction", Duration::from_secs(1), criterion_1),
        ("threshold scan", Duration::from_secs(5), criterion_2),
        ("decomposition partition", Duration::from_secs(5), criterion_3),
        ("qualifying chain", Duration::from_secs(30), criterion_4),
        ("weak duality", Duration::from_secs(30), criterion_5),
        ("scalar strong stable duality", Duration::from_secs(5), criterion_6),
        ("approximate representation", Duration::from_secs(60), criterion_7),
        ("reduction exactness", Duration::from_secs(2), criterion_8),
        ("vector strong duality", Duration::from_secs(60), criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed < *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {} ({name}): {} - {} [{:.3}s, budget {}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
