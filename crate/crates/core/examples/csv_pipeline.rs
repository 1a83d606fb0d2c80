//! Loads CSV tables, assembles an instance and writes its JSON snapshot.
//!
//! cargo run --example csv_pipeline -- data/toy_b/config.toml

use std::path::PathBuf;

use ldes_boundary::config::{Config, InputSource};
use ldes_boundary::pipeline::{assemble_instance, load_system, write_snapshot};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/toy_b/config.toml")
    });
    let config = Config::load(&path)?;
    let InputSource::Tables(paths) = config.input_source() else {
        return Err("config points at a snapshot, not CSV tables".into());
    };
    let raw = load_system(&paths)?;
    eprintln!(
        "{} generators, {} storages, {} hours, {} availability series",
        raw.generators.len(),
        raw.storages.len(),
        raw.demand.len(),
        raw.availability.len()
    );
    let instance = assemble_instance(&raw, &config.assembly_options())?;
    print!("{}", write_snapshot(&instance));
    Ok(())
}
