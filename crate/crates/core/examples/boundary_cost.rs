//! Boundary cost of LDES at one capacity on TOY-B. Gas is retired, solar
//! may be built, and 10 MW of 2-hour storage is fixed. The LP returns the
//! highest annualized cost per MW that keeps the system no dearer than q*.
//!
//! cargo run --example boundary_cost -- 10

use ldes_boundary::scenario::{run_baseline, run_opportunity, ScenarioOptions};
use ldes_boundary::toy::toy_b;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mw: f64 = std::env::args().nth(1).map_or(Ok(10.0), |s| s.parse())?;
    let instance = toy_b();
    let options = ScenarioOptions::default();
    let q_star = run_baseline(&instance, &options)?.q_star;
    let point = run_opportunity(&instance, q_star, mw, &options)?;
    println!("q* = {q_star} $");
    println!("LDES {mw} MW: boundary cost {} $/MW-yr", point.boundary_cost_per_mw);
    println!("budget overrun {}, viable {}", point.budget_overrun, point.viable);
    for (tech, built) in &point.plan.generation_mw {
        println!("  build {tech}: {built} MW");
    }
    for (tech, retired) in &point.plan.retired_mw {
        println!("  retire {tech}: {retired} MW");
    }
    Ok(())
}
