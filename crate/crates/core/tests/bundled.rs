use std::path::PathBuf;

use robust_duality::conjugate::LinearOperator;
use robust_duality::duality::{check_scalar_slater, solve_primal, solve_scalar_duals, verify_duality, DualGrids, ScalarRobustProgram, ScalarVariant, SlaterVariant, Variant};
use robust_duality::farkas::{check_h1, check_slater, h1_pairs};
use robust_duality::instance::{load, load_perturbations, load_probes, LoadedInstance};

fn instances_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

fn bundled(name: &str) -> LoadedInstance {
    load(instances_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

const VECTOR: [&str; 5] = ["tradeoff_orthant.json", "sheared_cone.json", "two_constraints.json", "steep_direction.json", "generated_cone.json"];

#[test]
fn every_bundled_instance_loads_and_satisfies_slater() {
    for name in VECTOR.iter().chain(&["robust_lp.json"]) {
        let li = bundled(name);
        assert!(li.instance.declarations.convex_regime, "{name}");
        let s = check_slater(&li.instance);
        assert!(s.holds(), "{name}: {:?}", s.witnesses);
    }
}

#[test]
fn declared_families_pass_uniform_concavity() {
    for name in VECTOR.iter().chain(&["robust_lp.json"]) {
        let li = bundled(name);
        let zgrid = robust_duality::cones::sample_dual_cone(&li.instance.s_cone, 4);
        let pairs = h1_pairs(&li.instance, &zgrid, 100, 11);
        assert!(check_h1(&li.instance, &pairs).unwrap().passed(), "{name}");
    }
}

#[test]
fn robust_lp_scalar_structure() {
    let li = bundled("robust_lp.json");
    let prog = ScalarRobustProgram::from_instance(&li.instance).unwrap();
    assert_eq!(prog.families[0].members.len(), 11);
    assert!(check_scalar_slater(&prog, SlaterVariant::PerSelection).holds());
    let v = load_perturbations(instances_dir().join("robust_lp_perturbations.json"), &li.instance).unwrap();
    for l in &v {
        let r = solve_scalar_duals(&prog, l.data(), ScalarVariant::Rcd1).unwrap();
        assert!(r.gap().abs() <= 1e-6, "x*={:?}: {r:?}", l.data());
    }
}

#[test]
fn two_constraint_instance_splits_into_indices() {
    let li = bundled("two_constraints.json");
    let l = LinearOperator::zeros(2, 1);
    let primal = solve_primal(&li.instance, &l).unwrap();
    assert!(!primal.wmin.is_empty());
    // m = 2 here, so the scalar reader refuses it.
    assert!(ScalarRobustProgram::from_instance(&li.instance).is_err());
}

#[test]
fn vector_duals_close_the_gap_on_bundled_instances() {
    for name in VECTOR {
        let li = bundled(name);
        let inst = &li.instance;
        let grids = DualGrids::from_loaded(&li).unwrap();
        let l = LinearOperator::zeros(inst.m(), inst.n());
        let primal = solve_primal(inst, &l).unwrap();
        let dual = robust_duality::duality::solve_dual(inst, &l, Variant::RvdK, &grids).unwrap();
        let r = verify_duality(inst, &primal, &dual, li.tolerances.gap).unwrap();
        assert!(r.weak_holds(), "{name}");
        assert!(r.exact_direction_holds(), "{name}");
        assert!(r.approximate_direction_holds(), "{name}: max gap {}", r.max_gap());
    }
}

#[test]
fn probe_file_loads_against_its_instance() {
    let li = bundled("tradeoff_orthant.json");
    let probes = load_probes(instances_dir().join("tradeoff_probes.json"), &li.instance).unwrap();
    assert_eq!(probes.len(), 5);
}
