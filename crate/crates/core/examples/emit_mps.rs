//! Writes the TOY-A baseline model as fixed MPS, reads it back and checks
//! that nothing was lost.
//!
//! cargo run --example emit_mps

use ldes_boundary::lp::{emit_mps, parse_mps};
use ldes_boundary::model::build_baseline_model;
use ldes_boundary::scenario::baseline_policy;
use ldes_boundary::toy::toy_a;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let instance = toy_a();
    let model = build_baseline_model(&instance, &baseline_policy(&instance))?;
    let text = emit_mps(&model.lp)?;
    print!("{text}");
    let back = parse_mps(&text)?;
    eprintln!("round trip identical: {}", back.structurally_eq(&model.lp));
    for (family, n) in model.registry.row_counts() {
        eprintln!("  {:<36} {n}", family.tag());
    }
    Ok(())
}
