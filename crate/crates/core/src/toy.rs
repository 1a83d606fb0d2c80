//! Small hand-checkable instances used throughout the tests and examples.
//!
//! * TOY-A: three hours of 10 MW demand served by one 20 MW gas unit, with a
//!   15% reserve requirement. Optimal cost is 150 (energy) + 4.5 (reserve).
//! * TOY-B: TOY-A without a reserve requirement, plus a candidate solar plant
//!   that is dark in hour 3 and a 2-hour long-duration storage candidate.
//!   Retiring gas forces 15 MW of solar (30 $) and 10 MW of storage shifting
//!   energy into hour 3, so the boundary cost at 10 MW is (150 - 30) / 10 = 12.

use crate::domain::{
    AssetStatus, DurationClass, GeneratorKind, GeneratorSpec, Profile, StorageSpec, SystemInstance,
};

pub fn toy_a() -> SystemInstance {
    let gas = GeneratorSpec {
        is_gas: true,
        provides_reserve: true,
        gen_cost_per_mwh: Profile::Constant(5.0),
        reserve_cost_per_mw: Profile::Constant(1.0),
        reserve_factor: 0.5,
        ..GeneratorSpec::firm("gas", "gas-cc", 20.0)
    };
    SystemInstance {
        horizon_hours: 3,
        demand_mwh: vec![10.0; 3],
        reserve_req_mw: vec![1.5; 3],
        imbalance_cost: 1000.0,
        reserve_short_cost: 500.0,
        generators: vec![gas],
        storages: vec![],
    }
}

pub fn toy_b() -> SystemInstance {
    let mut inst = toy_a();
    inst.reserve_req_mw = vec![0.0; 3];
    inst.generators.push(GeneratorSpec {
        id: "solar".into(),
        technology: "solar".into(),
        region: String::new(),
        kind: GeneratorKind::Renewable,
        status: AssetStatus::Candidate,
        is_gas: false,
        provides_reserve: false,
        capacity_mw: 0.0,
        invest_cost_per_mw_yr: 2.0,
        fom_cost_per_mw_yr: 0.0,
        gen_cost_per_mwh: Profile::Constant(0.0),
        reserve_cost_per_mw: Profile::Constant(0.0),
        availability: Profile::hourly(vec![1.0, 1.0, 0.0]),
        reserve_factor: 0.0,
        ramp_up_factor: 1.0,
        ramp_down_factor: 1.0,
        invest_limit_mw: 100.0,
        retire_min_frac: 0.0,
        retire_max_frac: 0.0,
    });
    inst.storages.push(StorageSpec {
        id: "ldes".into(),
        technology: "ldes".into(),
        duration_class: DurationClass::Long,
        status: AssetStatus::Candidate,
        power_mw: 0.0,
        duration_h: 2.0,
        rte: 1.0,
        soc_min_mwh: 0.0,
        soc_max_mwh: 0.0,
        fom_cost_per_mw_yr: 0.0,
        invest_cost_energy_per_mwh_yr: 0.0,
        invest_cost_power_per_mw_yr: 0.0,
        invest_limit_power_mw: 1000.0,
        invest_limit_energy_mwh: 2000.0,
    });
    inst
}
