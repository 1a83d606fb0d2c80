mod common;

use approx::assert_abs_diff_eq;
use common::{dense_simplex, random_instance, rel_close};
use ldes_boundary::domain::{GeneratorSpec, PolicyOverrides, Profile, SystemInstance};
use ldes_boundary::lp::{check_solution, solve, SolverConfig};
use ldes_boundary::model::{
    build_baseline_model, build_opportunity_model, ConstraintFamily as F, ModelError,
};
use ldes_boundary::toy;

fn no_overrides() -> PolicyOverrides {
    PolicyOverrides::default()
}

#[test]
fn toy_a_dimensions() {
    let inst = toy::toy_a();
    let m = build_baseline_model(&inst, &no_overrides()).unwrap();
    assert_eq!(m.lp.num_variables(), 17);
    assert_eq!(m.lp.num_constraints(), 17);
    let counts = m.registry.row_counts();
    assert_eq!(counts[&F::PowerBalance], 3);
    assert_eq!(counts[&F::ReserveMargin], 3);
    assert_eq!(counts[&F::OutputCapFirmFixed], 3);
    assert_eq!(counts[&F::ReserveCapFirmFixed], 3);
    assert_eq!(counts[&F::RampUpFixed], 2);
    assert_eq!(counts[&F::RampDownFixed], 2);
    assert_eq!(counts[&F::RemainingCapacity], 1);
    assert!(m
        .registry
        .bound_families()
        .iter()
        .any(|(_, f)| *f == F::RetirementWindow));
}

#[test]
fn every_row_is_tagged_and_every_variable_catalogued() {
    for seed in 0..20 {
        let inst = random_instance(seed);
        let m = build_baseline_model(&inst, &no_overrides()).unwrap();
        assert_eq!(m.registry.num_rows(), m.lp.num_constraints());
        let mut all = m.catalog.all();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), m.lp.num_variables());
    }
}

#[test]
fn toy_a_optimum_matches_hand_value() {
    let inst = toy::toy_a();
    let m = build_baseline_model(&inst, &no_overrides()).unwrap();
    let out = solve(&m.lp, &SolverConfig::default()).unwrap();
    assert!(out.is_optimal());
    assert_abs_diff_eq!(out.objective, 154.5, epsilon = 1e-6);
    assert_abs_diff_eq!(dense_simplex(&m.lp).objective(), 154.5, epsilon = 1e-6);
}

#[test]
fn reserve_shortage_is_priced_when_headroom_runs_out() {
    let mut inst = toy::toy_a();
    inst.reserve_req_mw = vec![11.0; 3];
    let m = build_baseline_model(&inst, &no_overrides()).unwrap();
    let out = solve(&m.lp, &SolverConfig::default()).unwrap();
    assert_abs_diff_eq!(out.objective, 1680.0, epsilon = 1e-6);
}

#[test]
fn empty_system_pays_imbalance() {
    let inst = SystemInstance {
        horizon_hours: 2,
        demand_mwh: vec![7.0, 7.0],
        reserve_req_mw: vec![0.0, 0.0],
        imbalance_cost: 1000.0,
        reserve_short_cost: 500.0,
        generators: vec![],
        storages: vec![],
    };
    let m = build_baseline_model(&inst, &no_overrides()).unwrap();
    let out = solve(&m.lp, &SolverConfig::default()).unwrap();
    assert_abs_diff_eq!(out.objective, 14000.0, epsilon = 1e-6);
}

#[test]
fn ramp_limit_binds() {
    let gas = GeneratorSpec {
        gen_cost_per_mwh: Profile::Constant(5.0),
        ramp_up_factor: 0.1,
        ..GeneratorSpec::firm("gas", "gas", 20.0)
    };
    let inst = SystemInstance {
        horizon_hours: 2,
        demand_mwh: vec![0.0, 10.0],
        reserve_req_mw: vec![0.0, 0.0],
        imbalance_cost: 1000.0,
        reserve_short_cost: 500.0,
        generators: vec![gas],
        storages: vec![],
    };
    let m = build_baseline_model(&inst, &no_overrides()).unwrap();
    let out = solve(&m.lp, &SolverConfig::default()).unwrap();
    assert_abs_diff_eq!(out.objective, 8010.0, epsilon = 1e-6);
    let p2 = m.catalog.generators[0].output[1];
    assert_abs_diff_eq!(out.primal[p2.0], 2.0, epsilon = 1e-6);
    assert_abs_diff_eq!(out.primal[m.catalog.imbalance_neg[1].0], 8.0, epsilon = 1e-6);
}

#[test]
fn reference_point_is_feasible() {
    for seed in 0..30 {
        let inst = random_instance(seed);
        let m = build_baseline_model(&inst, &no_overrides()).unwrap();
        let x = m.reference_point(&inst);
        let r = check_solution(&m.lp, &x, None, 1e-9);
        assert!(r.passes(), "seed {seed}: {:?}", r.row_violations);
    }
    let inst = toy::toy_b();
    let mut o = no_overrides();
    o.ldes_fixed_power_mw.insert("ldes".into(), 10.0);
    let m = build_opportunity_model(&inst, &o, 150.0).unwrap();
    let x = m.reference_point(&inst);
    assert!(check_solution(&m.lp, &x, None, 1e-9).passes());
}

#[test]
fn solver_agrees_with_dense_oracle_on_random_instances() {
    for seed in 0..25 {
        let inst = random_instance(seed);
        let m = build_baseline_model(&inst, &no_overrides()).unwrap();
        let out = solve(&m.lp, &SolverConfig::default()).unwrap();
        assert!(out.is_optimal(), "seed {seed}: {:?}", out.status);
        let oracle = dense_simplex(&m.lp).objective();
        assert!(
            rel_close(out.objective, oracle, 1e-6),
            "seed {seed}: solver {} oracle {}",
            out.objective,
            oracle
        );
    }
}

#[test]
fn opportunity_needs_positive_ldes() {
    let inst = toy::toy_b();
    let err = build_opportunity_model(&inst, &no_overrides(), 150.0).unwrap_err();
    assert_eq!(err, ModelError::ZeroLdesQuantity);
    assert_eq!(err.to_string(), "unbounded boundary cost: zero LDES quantity");
}

#[test]
fn storage_duration_ties_energy_to_power() {
    let inst = toy::toy_b();
    let mut o = no_overrides();
    o.ldes_fixed_power_mw.insert("ldes".into(), 10.0);
    let m = build_opportunity_model(&inst, &o, 150.0).unwrap();
    let s = &m.catalog.storages[0];
    let xp = m.lp.variable(s.power_invest.unwrap());
    let xe = m.lp.variable(s.energy_invest.unwrap());
    assert_eq!((xp.lower, xp.upper), (10.0, 10.0));
    assert_eq!((xe.lower, xe.upper), (20.0, 20.0));
    assert_eq!(m.registry.rows_of(F::StorageDuration).count(), 1);
    assert_eq!(m.registry.rows_of(F::OpportunityBudget).count(), 1);
}
