mod common;

use approx::assert_relative_eq;
use common::{dense_simplex, random_instance, rel_close, with_ldes};
use ldes_boundary::domain::Profile;
use ldes_boundary::model::{CostCategory, ModelError};
use ldes_boundary::scenario::{
    minimum_viable_capacity, run_baseline, run_opportunity, sweep_boundary_curve, ScenarioError,
    ScenarioOptions,
};
use ldes_boundary::toy;

fn opts() -> ScenarioOptions {
    ScenarioOptions::default()
}

#[test]
fn toy_a_baseline_breakdown() {
    let b = run_baseline(&toy::toy_a(), &opts()).unwrap();
    assert_relative_eq!(b.q_star, 154.5, max_relative = 1e-9);
    assert_relative_eq!(b.breakdown[&CostCategory::Generation("gas-cc".into())], 150.0, max_relative = 1e-9);
    assert_relative_eq!(b.breakdown[&CostCategory::Reserve("gas-cc".into())], 4.5, max_relative = 1e-9);
    let total: f64 = b.breakdown.values().sum();
    assert_relative_eq!(total, b.q_star, max_relative = 1e-9);
}

#[test]
fn toy_b_boundary_cost() {
    let inst = toy::toy_b();
    let q = run_baseline(&inst, &opts()).unwrap().q_star;
    assert_relative_eq!(q, 150.0, max_relative = 1e-9);
    let p = run_opportunity(&inst, q, 10.0, &opts()).unwrap();
    assert_relative_eq!(p.boundary_cost_per_mw, 12.0, max_relative = 1e-9);
    assert_eq!(p.budget_overrun, 0.0);
    assert!(p.viable);
    assert_relative_eq!(p.net_cost_reduction, 120.0, max_relative = 1e-9);
    assert_relative_eq!(p.plan.generation_mw["solar"], 15.0, max_relative = 1e-9);
    assert_relative_eq!(p.plan.retired_mw["gas-cc"], 20.0, max_relative = 1e-9);
    assert_relative_eq!(p.breakdown[&CostCategory::Investment("solar".into())], 30.0, max_relative = 1e-9);
    assert_relative_eq!(p.breakdown[&CostCategory::LdesOpportunityValue], 120.0, max_relative = 1e-9);
    assert_relative_eq!(p.budget_lhs(), 150.0, max_relative = 1e-9);
}

#[test]
fn expensive_solar_makes_boundary_cost_negative() {
    let mut inst = toy::toy_b();
    inst.generators[1].invest_cost_per_mw_yr = 16.0;
    let p = run_opportunity(&inst, 150.0, 10.0, &opts()).unwrap();
    assert_relative_eq!(p.boundary_cost_per_mw, -9.0, max_relative = 1e-9);
    assert!(!p.viable);
}

#[test]
fn storage_idles_when_solar_is_always_available() {
    let mut inst = toy::toy_b();
    inst.generators[1].availability = Profile::hourly(vec![1.0, 1.0, 1.0]);
    let p = run_opportunity(&inst, 150.0, 10.0, &opts()).unwrap();
    assert_relative_eq!(p.boundary_cost_per_mw, 13.0, max_relative = 1e-9);
}

#[test]
fn small_budget_goes_negative_or_overruns_with_a_floor() {
    let inst = toy::toy_b();
    let p = run_opportunity(&inst, 20.0, 10.0, &opts()).unwrap();
    assert_relative_eq!(p.boundary_cost_per_mw, -1.0, max_relative = 1e-9);
    assert_eq!(p.budget_overrun, 0.0);
    let floored = ScenarioOptions {
        boundary_cost_floor: Some(0.0),
        ..opts()
    };
    let p = run_opportunity(&inst, 20.0, 10.0, &floored).unwrap();
    assert_eq!(p.boundary_cost_per_mw, 0.0);
    assert_relative_eq!(p.budget_overrun, 10.0, max_relative = 1e-9);
    assert!(!p.viable);
}

#[test]
fn zero_ldes_is_rejected() {
    let err = run_opportunity(&toy::toy_b(), 150.0, 0.0, &opts()).unwrap_err();
    assert_eq!(err, ScenarioError::Model(ModelError::ZeroLdesQuantity));
    let err = run_opportunity(&toy::toy_a(), 150.0, 10.0, &opts()).unwrap_err();
    assert_eq!(err, ScenarioError::NoLdesCandidate);
}

#[test]
fn sweep_preserves_order_and_shares_q_star() {
    let inst = toy::toy_b();
    let options = ScenarioOptions { workers: 3, ..opts() };
    let pts = sweep_boundary_curve(&inst, 150.0, &[5.0, 10.0, 20.0], &options).unwrap();
    let caps: Vec<f64> = pts.iter().map(|p| p.ldes_power_mw).collect();
    assert_eq!(caps, vec![5.0, 10.0, 20.0]);
    for p in &pts {
        assert_eq!(p.outcome.as_ref().unwrap().q_star, 150.0);
    }
    let single = sweep_boundary_curve(&inst, 150.0, &[10.0], &opts()).unwrap();
    let direct = run_opportunity(&inst, 150.0, 10.0, &opts()).unwrap();
    assert_eq!(single[0].outcome.as_ref().unwrap().primal, direct.primal);
    let twice = sweep_boundary_curve(&inst, 150.0, &[10.0, 10.0], &options).unwrap();
    let a = twice[0].outcome.as_ref().unwrap();
    let b = twice[1].outcome.as_ref().unwrap();
    assert_eq!(a.primal, b.primal);
    assert_eq!(a.boundary_cost_per_mw.to_bits(), b.boundary_cost_per_mw.to_bits());
    assert!(!pts[0].outcome.as_ref().unwrap().viable);
    assert_eq!(minimum_viable_capacity(&pts), Some(10.0));
}

#[test]
fn sweep_rejects_bad_capacity_lists() {
    let inst = toy::toy_b();
    for caps in [vec![], vec![0.0], vec![10.0, 5.0], vec![f64::NAN]] {
        assert!(matches!(
            sweep_boundary_curve(&inst, 150.0, &caps, &opts()),
            Err(ScenarioError::InvalidCapacities(_))
        ));
    }
}

#[test]
fn scaling_costs_scales_q_star_and_boundary_cost() {
    let inst = toy::toy_b();
    let scaled = inst.with_costs_scaled(3.5);
    let q = run_baseline(&inst, &opts()).unwrap().q_star;
    let qs = run_baseline(&scaled, &opts()).unwrap().q_star;
    assert_relative_eq!(qs, 3.5 * q, max_relative = 1e-9);
    let c = run_opportunity(&inst, q, 10.0, &opts()).unwrap().boundary_cost_per_mw;
    let cs = run_opportunity(&scaled, qs, 10.0, &opts()).unwrap().boundary_cost_per_mw;
    assert_relative_eq!(cs, 3.5 * c, max_relative = 1e-9);
}

#[test]
fn random_instances_bind_the_budget_and_match_the_oracle() {
    for seed in 0..15 {
        let inst = with_ldes(random_instance(seed));
        let base = run_baseline(&inst, &opts()).unwrap();
        assert!(rel_close(base.q_star, dense_simplex(&base.model.lp).objective(), 1e-6));
        let p = run_opportunity(&inst, base.q_star, 10.0, &opts()).unwrap();
        let oracle = dense_simplex(&p.model.lp).objective();
        assert!(
            rel_close(p.model.lp.objective_value(&p.primal), oracle, 1e-6),
            "seed {seed}"
        );
        if p.viable {
            assert!((p.budget_lhs() - base.q_star).abs() <= 1e-6 * base.q_star.abs().max(1.0));
            assert!(rel_close(p.boundary_cost_per_mw * 10.0, p.net_cost_reduction, 1e-6));
        }
    }
}
