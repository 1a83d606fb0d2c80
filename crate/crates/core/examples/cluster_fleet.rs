//! Aggregates a fleet of gas units into three cost clusters with exact
//! 1-D k-means. Capacity is summed, other parameters are capacity-weighted.
//!
//! cargo run --example cluster_fleet

use ldes_boundary::domain::{GeneratorSpec, Profile};
use ldes_boundary::pipeline::cluster_generators;

fn main() {
    // (MW, $/MWh)
    let units = [
        (50.0, 31.0), (55.0, 30.0), (60.0, 32.0), (240.0, 45.0), (250.0, 47.0),
        (260.0, 44.0), (600.0, 80.0), (610.0, 78.0), (45.0, 46.0), (620.0, 82.0),
    ];
    let fleet: Vec<GeneratorSpec> = units
        .iter()
        .enumerate()
        .map(|(i, &(mw, cost))| GeneratorSpec {
            is_gas: true,
            gen_cost_per_mwh: Profile::Constant(cost),
            ..GeneratorSpec::firm(&format!("gas{i}"), "gas-ct", mw)
        })
        .collect();
    let clustered = cluster_generators(&fleet, 3);
    let before: f64 = fleet.iter().map(|g| g.capacity_mw).sum();
    let after: f64 = clustered.iter().map(|g| g.capacity_mw).sum();
    for g in &clustered {
        println!("{:<16} {:>8} MW {:>8.2} $/MWh", g.id, g.capacity_mw, g.gen_cost_per_mwh.mean());
    }
    println!("{} units -> {} clusters, capacity {before} -> {after} MW", fleet.len(), clustered.len());
}
