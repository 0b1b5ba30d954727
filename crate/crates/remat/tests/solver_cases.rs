//! Known-instance pins for every solver, plus registry behavior.

mod common;

use common::profile_from;
use remat::solvers::{
    brute_force_dynamic, brute_force_static, solve_dynamic_linear, solve_dynamic_quadratic,
    solve_sqrt_baseline, solve_static_dp, BRUTE_FORCE_LIMIT,
};
use remat::{dynamic_peak, static_cost, CostModel, SolveError, SolverRegistry};

#[test]
fn static_dp_known_optimum() {
    let p = profile_from(&[2, 1, 1, 1, 2]);
    let r = solve_static_dp(&p);
    assert_eq!(r.predicted_peak, 6);
    assert_eq!(r.plan.indices(), &[0, 2, 4]);
    assert_eq!(r.solver, "static-dp");
    assert_eq!(r.model, CostModel::Static);
}

#[test]
fn static_dp_holds_the_final_activation() {
    // the cheapest chain must still checkpoint the last index: with a huge
    // middle activation every plan costs 306, never 206
    let p = profile_from(&[1, 200, 5, 100]);
    let r = solve_static_dp(&p);
    assert_eq!(r.predicted_peak, 306);
    let b = brute_force_static(&p).unwrap();
    assert_eq!(b.predicted_peak, 306);
}

#[test]
fn dynamic_solvers_agree_on_known_optimum() {
    let p = profile_from(&[2, 1, 1, 2]);
    let quad = solve_dynamic_quadratic(&p);
    let lin = solve_dynamic_linear(&p);
    let brute = brute_force_dynamic(&p).unwrap();
    for r in [&quad, &lin, &brute] {
        assert_eq!(r.predicted_peak, 6);
        assert_eq!(r.plan.indices(), &[0, 2, 3]);
    }
    assert_eq!(quad.solver, "dynamic-n2");
    assert_eq!(lin.solver, "dynamic-linear");
}

#[test]
fn shortest_chain_is_trivial_everywhere() {
    let p = profile_from(&[3, 9]);
    let registry = SolverRegistry::with_defaults();
    for solver in registry.iter() {
        let r = solver.solve(&p).unwrap();
        assert_eq!(r.plan.indices(), &[0, 1], "{}", solver.name());
        let expected = match r.model {
            CostModel::Static => 12,
            CostModel::Dynamic => 15,
        };
        assert_eq!(r.predicted_peak, expected, "{}", solver.name());
    }
}

#[test]
fn sqrt_spacing_is_even() {
    let p = profile_from(&[1u64; 25]);
    let r = solve_sqrt_baseline(&p, CostModel::Dynamic);
    assert_eq!(r.plan.indices(), &[0, 5, 10, 15, 20, 24]);
    let p9 = profile_from(&[1u64; 10]);
    let r9 = solve_sqrt_baseline(&p9, CostModel::Static);
    assert_eq!(r9.plan.indices(), &[0, 3, 6, 9]);
    assert_eq!(r9.model, CostModel::Static);
}

#[test]
fn predicted_peaks_match_recomputation() {
    let sizes = [9u64, 2, 14, 3, 3, 8, 1, 12, 5];
    let p = profile_from(&sizes);
    let registry = SolverRegistry::with_defaults();
    for solver in registry.iter() {
        let r = solver.solve(&p).unwrap();
        let again = match r.model {
            CostModel::Static => static_cost(&sizes, &r.plan),
            CostModel::Dynamic => dynamic_peak(&sizes, &r.plan),
        };
        assert_eq!(r.predicted_peak, again, "{}", solver.name());
    }
}

#[test]
fn solving_is_deterministic() {
    let p = profile_from(&common::random_sizes(&mut common::rng(42), 60, 1_000_000));
    let registry = SolverRegistry::with_defaults();
    for solver in registry.iter() {
        if p.last_index() > BRUTE_FORCE_LIMIT && solver.name().starts_with("brute") {
            continue;
        }
        let a = solver.solve(&p).unwrap();
        let b = solver.solve(&p).unwrap();
        assert_eq!(a.plan.indices(), b.plan.indices(), "{}", solver.name());
        assert_eq!(a.predicted_peak, b.predicted_peak, "{}", solver.name());
    }
}

#[test]
fn brute_force_guards_long_chains() {
    let sizes: Vec<u64> = (1..=40).collect();
    let p = profile_from(&sizes);
    for name in ["brute-static", "brute-dynamic"] {
        let registry = SolverRegistry::with_defaults();
        let err = registry.get(name).unwrap().solve(&p).unwrap_err();
        assert_eq!(
            err,
            SolveError::TooLarge {
                layers: 39,
                limit: BRUTE_FORCE_LIMIT
            },
            "{name}"
        );
    }
}

#[test]
fn registry_exposes_all_solvers_by_name() {
    let registry = SolverRegistry::with_defaults();
    assert_eq!(
        registry.names(),
        vec![
            "static-dp",
            "dynamic-n2",
            "dynamic-linear",
            "sqrt",
            "brute-static",
            "brute-dynamic"
        ]
    );
    assert!(registry.get("static-dp").is_some());
    assert!(registry.get("no-such-solver").is_none());
    for solver in registry.iter() {
        assert_eq!(registry.get(solver.name()).unwrap().name(), solver.name());
    }
}
