//! Solves TOY-A, then checks the point against every bound and row, and
//! shows what a perturbed point looks like to the checker.
//!
//! cargo run --example verify_solution

use ldes_boundary::lp::check_solution;
use ldes_boundary::scenario::{run_baseline, ScenarioOptions};
use ldes_boundary::toy::toy_a;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let result = run_baseline(&toy_a(), &ScenarioOptions::default())?;
    let lp = &result.model.lp;
    let report = check_solution(lp, &result.primal, None, 1e-6);
    println!("solver point passes: {} (objective {})", report.passes(), report.objective_recomputed);

    let mut x = result.primal.clone();
    x[0] += 1.0;
    let report = check_solution(lp, &x, None, 1e-6);
    println!("perturbed {} passes: {}", lp.variables()[0].label, report.passes());
    for v in &report.row_violations {
        println!("  {v:?}");
    }
    Ok(())
}
