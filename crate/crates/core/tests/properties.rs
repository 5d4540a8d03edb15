use proptest::prelude::*;

use robust_duality::cones::{sample_dual_cone, Direction, PolyhedralCone};
use robust_duality::conjugate::{composite_k, epi_conjugate_contains, EpiPoint, GroundSet, LinearOperator};
use robust_duality::duality::{
    reconstruct, solve_dual, solve_dual_k, solve_dual_t, solve_scalar_duals, DualGrids, ScalarRobustProgram, ScalarVariant, Variant,
};
use robust_duality::farkas::{beta_holds, delta_holds, gamma_check, statement_beta_search, statement_delta_certify, statement_gamma_search, Membership};
use robust_duality::instance::load;
use robust_duality::lp::{convex_hull_membership, lp_solve, Bound, LpProblem, Relation};
use robust_duality::sectional::{is_sectionally_convex, ProbePlan, SectionalVerdict};

fn instance(name: &str) -> robust_duality::instance::LoadedInstance {
    load(std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name)).unwrap()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Simplicial cone in R² from two generator angles, normals by rotation.
fn planar_cone(a: f64, spread: f64) -> PolyhedralCone {
    let b = a + spread;
    let g = [vec![a.cos(), a.sin()], vec![b.cos(), b.sin()]];
    let normals = (0..2)
        .map(|i| {
            let o = &g[1 - i];
            let n = vec![-o[1], o[0]];
            let s = dot(&n, &g[i]).signum();
            n.iter().map(|v| v * s).collect()
        })
        .collect();
    PolyhedralCone::new(normals, g.to_vec()).unwrap()
}

fn combo(cone: &PolyhedralCone, w: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; cone.dim()];
    for (g, c) in cone.generators().iter().zip(w) {
        for (o, v) in out.iter_mut().zip(g) {
            *o += c * v;
        }
    }
    out
}

fn cone_params() -> impl Strategy<Value = (f64, f64)> {
    (0.0..std::f64::consts::TAU, 0.2..std::f64::consts::PI - 0.2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lp_optimum_beats_random_feasible_points(
        rows in prop::collection::vec((prop::collection::vec(-2.0f64..2.0, 3), 0.0f64..4.0), 1..5),
        c in prop::collection::vec(-3.0f64..3.0, 3),
        seeds in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 400),
    ) {
        let mut lp = LpProblem::maximize(c.clone());
        for v in 0..3 {
            lp.bound(v, Bound::between(-5.0, 5.0));
        }
        for (a, b) in &rows {
            lp.constrain(a.clone(), Relation::Le, *b);
        }
        let sol = lp_solve(&lp).unwrap();
        let x = sol.point().expect("origin is feasible and the box is bounded");
        for (a, b) in &rows {
            prop_assert!(dot(a, x) <= b + 1e-9);
        }
        prop_assert!(x.iter().all(|v| (-5.0 - 1e-9..=5.0 + 1e-9).contains(v)));
        let feasible: Vec<_> = seeds.iter().filter(|s| rows.iter().all(|(a, b)| dot(a, s) <= *b)).take(100).collect();
        for s in feasible {
            prop_assert!(sol.value().unwrap() >= dot(&c, s) - 1e-9);
        }
    }

    #[test]
    fn hull_membership_agrees_with_weight_grid(
        pts in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 2), 1..=4),
        q in prop::collection::vec(-3.0f64..3.0, 2),
        pick in prop::collection::vec(0usize..=50, 4),
    ) {
        let step = 0.02;
        let grid = weight_grid(pts.len(), 50);
        let at = |w: &[f64]| (0..2).map(|j| pts.iter().zip(w).map(|(p, l)| p[j] * l).sum::<f64>()).collect::<Vec<f64>>();
        let nearest = grid.iter().map(|w| at(w).iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)).fold(f64::INFINITY, f64::min);
        let diam = pts.iter().flat_map(|a| pts.iter().map(move |b| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))).fold(0.0, f64::max);
        match convex_hull_membership(&pts, &q, 0.0).unwrap() {
            Some(w) => prop_assert!(nearest <= step * pts.len() as f64 * diam + 1e-9, "accepted but grid distance {nearest}, weights {w:?}"),
            None => prop_assert!(nearest > 1e-9),
        }
        // A point built from grid weights is always accepted.
        let total: usize = pick[..pts.len()].iter().map(|v| v + 1).sum();
        let w: Vec<f64> = pick[..pts.len()].iter().map(|&v| (v + 1) as f64 / total as f64).collect();
        prop_assert!(convex_hull_membership(&pts, &at(&w), 1e-9).unwrap().is_some());
    }
}

/// Weights `i/den` summing to one.
fn weight_grid(len: usize, den: usize) -> Vec<Vec<f64>> {
    fn rec(left: usize, slots: usize, prefix: &mut Vec<usize>, den: usize, out: &mut Vec<Vec<f64>>) {
        if slots == 1 {
            prefix.push(left);
            out.push(prefix.iter().map(|&v| v as f64 / den as f64).collect());
            prefix.pop();
            return;
        }
        for v in 0..=left {
            prefix.push(v);
            rec(left - v, slots - 1, prefix, den, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(den, len, &mut Vec::new(), den, &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn non_negative_interior_is_convex_along_a_ray(
        (a, spread) in cone_params(),
        y in prop::collection::vec(-3.0f64..3.0, 2),
        w in prop::collection::vec(0.0f64..2.0, 2),
        alpha in -4.0f64..4.0,
        beta in -4.0f64..4.0,
        lambda in 0.0f64..1.0,
    ) {
        let cone = planar_cone(a, spread);
        let k0 = combo(&cone, &w);
        let at = |t: f64| y.iter().zip(&k0).map(|(a, b)| a + t * b).collect::<Vec<f64>>();
        if !cone.in_neg_interior(&at(alpha)) && !cone.in_neg_interior(&at(beta)) {
            prop_assert!(!cone.in_neg_interior(&at(lambda * alpha + (1.0 - lambda) * beta)));
        }
    }

    #[test]
    fn cone_plus_interior_is_interior(
        (a, spread) in cone_params(),
        w in prop::collection::vec(0.0f64..3.0, 2),
        v in prop::collection::vec(0.01f64..3.0, 2),
    ) {
        let cone = planar_cone(a, spread);
        let p = combo(&cone, &w);
        let q = combo(&cone, &v);
        if cone.normals().iter().all(|n| dot(n, &q) > 1e-9) {
            let s: Vec<f64> = p.iter().zip(&q).map(|(a, b)| a + b).collect();
            prop_assert!(cone.normals().iter().all(|n| dot(n, &s) > 0.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn threshold_splits_the_ray(
        (a, spread) in cone_params(),
        y in prop::collection::vec(-3.0f64..3.0, 2),
        w in prop::collection::vec(0.2f64..1.0, 2),
    ) {
        let cone = planar_cone(a, spread);
        let k = Direction::new(&cone, combo(&cone, &w)).unwrap();
        let bar = cone.threshold_alpha(&y, k.as_slice()).unwrap();
        for i in 0..200 {
            let alpha = bar - 2.0 + 4.0 * i as f64 / 199.0;
            if (alpha - bar).abs() < 1e-9 {
                continue;
            }
            let p: Vec<f64> = y.iter().zip(k.as_slice()).map(|(a, b)| a + alpha * b).collect();
            prop_assert_eq!(cone.in_neg_interior(&p), alpha < bar);
        }
    }
}

/// Membership in the union over all `z ≥ 0` of `epi(F + I_C + (k·z)∘G_u)*`
/// for a scalar constraint: each `x` bounds `z` through `z·G_u(x) ≥ ᾱ_x`.
fn in_multiplier_union(inst: &robust_duality::farkas::RobustInstance, u: usize, p: &EpiPoint) -> bool {
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for x in inst.c_dom() {
        let g = inst.scenarios[u].g.get(x).unwrap()[0];
        let w = inst.residual(p, x);
        let alpha = inst.k_cone.normals().iter().map(|a| -dot(a, &w) / dot(a, inst.k())).fold(f64::INFINITY, f64::min);
        if g > 0.0 {
            lo = lo.max(alpha / g);
        } else if g < 0.0 {
            hi = hi.min(alpha / g);
        } else if alpha > 1e-9 {
            return false;
        }
    }
    lo <= hi + 1e-9
}

#[test]
fn union_of_multiplier_conjugates_is_sectionally_convex() {
    let li = instance("sheared_cone.json");
    let inst = &li.instance;
    for u in [0, inst.scenarios.len() - 1] {
        let oracle = |p: &EpiPoint| in_multiplier_union(inst, u, p);
        match is_sectionally_convex(oracle, inst.k(), &ProbePlan::new((2, 1), 34 + u as u64, 1000)).unwrap() {
            SectionalVerdict::Pass { probed, .. } => assert_eq!(probed, 1000),
            fail => panic!("{fail:?}"),
        }
    }
}

/// The exact union oracle agrees with the grid union on grid multipliers.
#[test]
fn multiplier_union_contains_grid_conjugates() {
    let li = instance("sheared_cone.json");
    let inst = &li.instance;
    let zgrid = sample_dual_cone(&inst.s_cone, 4);
    let probe = |i: usize| {
        let t = i as f64 * 0.37;
        EpiPoint::new(LinearOperator::new(2, 1, vec![t.sin(), (2.0 * t).cos()]).unwrap(), vec![3.0 * t.cos(), 2.0 * (0.5 * t).sin() + 1.0]).unwrap()
    };
    let mut hits = 0;
    for i in 0..400 {
        let p = probe(i);
        for (u, s) in inst.scenarios.iter().enumerate() {
            let grid_hit = zgrid.iter().any(|z| {
                let f = composite_k(&inst.f, &inst.c_mask, z, &s.g, inst.k()).unwrap();
                epi_conjugate_contains(&inst.ground, &f, &inst.k_cone, &p).unwrap()
            });
            if grid_hit {
                hits += 1;
                assert!(in_multiplier_union(inst, u, &p));
            }
        }
    }
    assert!(hits > 0);
}

#[test]
fn search_certificates_reverify_directly() {
    for name in ["sheared_cone.json", "steep_direction.json", "two_constraints.json"] {
        let li = instance(name);
        let inst = &li.instance;
        let tgrid = inst.operator_grid(4, &li.extra_operators);
        let ground = GroundSet::interval(-1.0, 1.0, 5).unwrap();
        let mut certified = 0;
        for (i, x) in ground.points().iter().enumerate() {
            for y0 in [-2.0, 0.0, 1.5, 4.0] {
                let op = LinearOperator::new(2, 1, vec![x[0], -x[0] * 0.5]).unwrap();
                let p = EpiPoint::new(op, vec![y0, y0 + i as f64 * 0.25]).unwrap();
                if let Some(c) = statement_delta_certify(inst, &p).unwrap() {
                    assert!(delta_holds(inst, &p, c.scenario, c.zstar.as_slice()));
                    certified += 1;
                }
                if let Some(c) = statement_beta_search(inst, &p, &tgrid).unwrap().certificate() {
                    assert!(beta_holds(inst, &p, c.scenario, &c.op));
                    certified += 1;
                }
                if let Some(c) = statement_gamma_search(inst, &p, &tgrid).unwrap().certificate() {
                    assert_eq!(gamma_check(inst, &p, c.scenario, &c.op).unwrap(), Membership::In);
                    certified += 1;
                }
            }
        }
        assert!(certified > 0, "{name}: no certificate to re-verify");
    }
}

#[test]
fn dual_points_reconstruct_bitwise() {
    for name in ["tradeoff_orthant.json", "generated_cone.json", "robust_lp.json"] {
        let li = instance(name);
        let inst = &li.instance;
        let grids = DualGrids::from_instance(inst, 4, &li.extra_operators);
        let l = LinearOperator::new(inst.m(), inst.n(), vec![0.25; inst.m() * inst.n()]).unwrap();
        for variant in [Variant::RvdK, Variant::Rvd, Variant::RvdW] {
            let d = solve_dual(inst, &l, variant, &grids).unwrap();
            for p in &d.points {
                assert_eq!(reconstruct(inst, &l, p).unwrap(), p.value, "{name} {variant:?}");
            }
        }
    }
}

#[test]
fn scalar_duals_agree_across_solvers() {
    let li = instance("robust_lp.json");
    let inst = &li.instance;
    let prog = ScalarRobustProgram::from_instance(inst).unwrap();
    let zgrid = sample_dual_cone(&inst.s_cone, 3);
    let tgrid: Vec<LinearOperator> = zgrid.iter().map(|z| LinearOperator::rank_one(inst.k(), z)).collect();
    for xs in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let l = LinearOperator::new(1, 1, vec![xs]).unwrap();
        let top = |v: Vec<Vec<f64>>| v.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        let dk = top(solve_dual_k(inst, &l, &zgrid).unwrap().wmax_values());
        let dt = top(solve_dual_t(inst, &l, &tgrid).unwrap().wmax_values());
        let rcd1 = solve_scalar_duals(&prog, &[xs], ScalarVariant::Rcd1).unwrap().dual;
        assert!((dk - dt).abs() <= 1e-9, "x*={xs}: {dk} vs {dt}");
        // The LP dual is the supremum over all z*; the grid value is a lower bound
        // that meets it when the optimal multiplier is on the ladder.
        assert!(dk <= rcd1 + 1e-9, "x*={xs}: grid {dk} above RCD1 {rcd1}");
    }
    let l = LinearOperator::zeros(1, 1);
    let dk = solve_dual_k(inst, &l, &zgrid).unwrap().wmax_values()[0][0];
    assert!((dk - solve_scalar_duals(&prog, &[0.0], ScalarVariant::Rcd1).unwrap().dual).abs() <= 1e-9);
}
