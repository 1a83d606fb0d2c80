use serde::Serialize;

use super::types::{AssetStatus, DurationClass, GeneratorKind, SystemInstance};

/// Positions of assets in `instance.generators` / `instance.storages`,
/// partitioned into the classes the capacity model distinguishes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IndexSets {
    pub gen_candidate: Vec<usize>,
    pub gen_fixed: Vec<usize>,
    pub firm_fixed: Vec<usize>,
    pub renewable_fixed: Vec<usize>,
    pub firm_candidate: Vec<usize>,
    pub renewable_candidate: Vec<usize>,
    pub gas_fixed: Vec<usize>,
    pub reserve_providers: Vec<usize>,
    pub storage_fixed: Vec<usize>,
    pub storage_candidate: Vec<usize>,
    pub short_fixed: Vec<usize>,
    pub long_fixed: Vec<usize>,
    pub short_candidate: Vec<usize>,
    pub long_candidate: Vec<usize>,
}

pub fn classify_assets(instance: &SystemInstance) -> IndexSets {
    let mut s = IndexSets::default();
    for (i, g) in instance.generators.iter().enumerate() {
        match g.status {
            AssetStatus::Fixed => s.gen_fixed.push(i),
            AssetStatus::Candidate => s.gen_candidate.push(i),
        }
        match (g.kind, g.status) {
            (GeneratorKind::Firm, AssetStatus::Fixed) => s.firm_fixed.push(i),
            (GeneratorKind::Renewable, AssetStatus::Fixed) => s.renewable_fixed.push(i),
            (GeneratorKind::Firm, AssetStatus::Candidate) => s.firm_candidate.push(i),
            (GeneratorKind::Renewable, AssetStatus::Candidate) => s.renewable_candidate.push(i),
        }
        if g.is_gas && g.kind == GeneratorKind::Firm && g.status == AssetStatus::Fixed {
            s.gas_fixed.push(i);
        }
        if g.provides_reserve {
            s.reserve_providers.push(i);
        }
    }
    for (i, h) in instance.storages.iter().enumerate() {
        match h.status {
            AssetStatus::Fixed => s.storage_fixed.push(i),
            AssetStatus::Candidate => s.storage_candidate.push(i),
        }
        match (h.duration_class, h.status) {
            (DurationClass::Short, AssetStatus::Fixed) => s.short_fixed.push(i),
            (DurationClass::Long, AssetStatus::Fixed) => s.long_fixed.push(i),
            (DurationClass::Short, AssetStatus::Candidate) => s.short_candidate.push(i),
            (DurationClass::Long, AssetStatus::Candidate) => s.long_candidate.push(i),
        }
    }
    s
}
