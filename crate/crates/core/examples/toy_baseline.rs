//! Baseline capacity expansion on TOY-A: one gas unit, flat demand, a 15%
//! reserve requirement. Prints q* and the cost breakdown.
//!
//! cargo run --example toy_baseline

use ldes_boundary::scenario::{run_baseline, ScenarioOptions};
use ldes_boundary::toy::toy_a;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let instance = toy_a();
    let result = run_baseline(&instance, &ScenarioOptions::default())?;
    println!("q* = {} $", result.q_star);
    for (category, cost) in &result.breakdown {
        println!("  {category:<32} {cost:>10.3}");
    }
    println!(
        "{} variables, {} constraints",
        result.model.lp.num_variables(),
        result.model.lp.num_constraints()
    );
    Ok(())
}
