//! Boundary-cost curve from a config file, solved in parallel.
//!
//! cargo run --example sweep_curve -- data/toy_b/config.toml

use std::path::PathBuf;

use ldes_boundary::config::Config;
use ldes_boundary::scenario::{minimum_viable_capacity, run_baseline, sweep_boundary_curve};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/toy_b/config.toml")
    });
    let config = Config::load(&path)?;
    let instance = config.instance()?;
    let mut options = config.scenario_options();
    options.workers = 0;
    let q_star = run_baseline(&instance, &options)?.q_star;
    let points = sweep_boundary_curve(&instance, q_star, &config.sweep.capacities_mw, &options)?;
    println!("{:>12} {:>16} {:>8}", "LDES MW", "$/MW-yr", "viable");
    for p in &points {
        match &p.outcome {
            Ok(b) => println!("{:>12} {:>16.4} {:>8}", p.ldes_power_mw, b.boundary_cost_per_mw, b.viable),
            Err(e) => println!("{:>12} failed: {e}", p.ldes_power_mw),
        }
    }
    match minimum_viable_capacity(&points) {
        Some(mw) => println!("minimum viable capacity: {mw} MW"),
        None => println!("no viable capacity in the sweep"),
    }
    Ok(())
}
