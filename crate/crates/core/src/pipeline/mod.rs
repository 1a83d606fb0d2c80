//! From CSV tables to a validated [`SystemInstance`].

mod cluster;
mod tables;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{
    validate_instance, AssetStatus, DurationClass, GeneratorSpec, StorageSpec, SystemInstance,
    ValidationReport,
};

pub use cluster::{cluster_generators, kmeans_1d};
pub use tables::{load_system, CostRow, DataPaths, GeneratorRow, RawTables, Sourced};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("{file}: {message}")]
    Io { file: String, message: String },
    #[error("{file}:{line}: {message}")]
    Parse { file: String, line: usize, message: String },
    #[error("{file}:{line}: field `{field}`: {message}")]
    Range {
        file: String,
        line: usize,
        field: String,
        message: String,
    },
    #[error("{file}:{line}: {message}")]
    Reference { file: String, line: usize, message: String },
    #[error("{file}:{line}: {message}")]
    Hours { file: String, line: usize, message: String },
    #[error("assembled instance is invalid:\n{0}")]
    Invalid(ValidationReport),
    #[error("snapshot: {0}")]
    Snapshot(String),
}

/// Hourly up-reserve requirement as a fixed share of demand.
pub fn derive_reserve_requirement(demand: &[f64], fraction: f64) -> Vec<f64> {
    assert!(fraction >= 0.0, "reserve fraction must be non-negative");
    demand.iter().map(|d| fraction * d).collect()
}

/// A candidate clone of every existing renewable unit.
///
/// Each clone has no installed capacity and may build up to its source's
/// capacity. A per-technology limit in `limits_mw` replaces that default:
/// it is the total for the technology, shared among its clones in
/// proportion to their sources' capacities. Availability series are shared
/// with the source.
pub fn mirror_candidates(
    existing: &[GeneratorSpec],
    limits_mw: &BTreeMap<String, f64>,
) -> Vec<GeneratorSpec> {
    let sources: Vec<&GeneratorSpec> = existing
        .iter()
        .filter(|g| g.is_renewable() && g.is_fixed())
        .collect();
    let mut tech_capacity: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for g in &sources {
        let e = tech_capacity.entry(g.technology.as_str()).or_insert((0.0, 0));
        e.0 += g.capacity_mw;
        e.1 += 1;
    }
    sources
        .iter()
        .map(|g| {
            let limit = match limits_mw.get(&g.technology) {
                Some(total) => {
                    let (cap, n) = tech_capacity[g.technology.as_str()];
                    if cap > 0.0 {
                        total * g.capacity_mw / cap
                    } else {
                        total / n as f64
                    }
                }
                None => g.capacity_mw,
            };
            GeneratorSpec {
                id: format!("{}-new", g.id),
                status: AssetStatus::Candidate,
                capacity_mw: 0.0,
                invest_limit_mw: limit,
                retire_min_frac: 0.0,
                retire_max_frac: 0.0,
                ..(*g).clone()
            }
        })
        .collect()
}

/// A storage candidate added during assembly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StorageCandidateOptions {
    pub id: String,
    pub technology: String,
    pub duration_h: f64,
    pub rte: f64,
    pub power_limit_mw: f64,
    /// Defaults to power limit x duration.
    pub energy_limit_mwh: Option<f64>,
    pub fom_cost_per_mw_yr: f64,
    pub invest_cost_energy_per_mwh_yr: f64,
    pub invest_cost_power_per_mw_yr: f64,
}

impl StorageCandidateOptions {
    pub fn sdes() -> Self {
        StorageCandidateOptions {
            id: "sdes".into(),
            technology: "battery-4h".into(),
            duration_h: 4.0,
            rte: 0.85,
            power_limit_mw: 43_000.0,
            energy_limit_mwh: None,
            fom_cost_per_mw_yr: 0.0,
            invest_cost_energy_per_mwh_yr: 0.0,
            invest_cost_power_per_mw_yr: 0.0,
        }
    }

    pub fn ldes() -> Self {
        StorageCandidateOptions {
            id: "ldes".into(),
            technology: "ldes-100h".into(),
            duration_h: 100.0,
            rte: 0.425,
            power_limit_mw: 75_000.0,
            ..StorageCandidateOptions::sdes()
        }
    }

    fn spec(&self, class: DurationClass) -> StorageSpec {
        StorageSpec {
            id: self.id.clone(),
            technology: self.technology.clone(),
            duration_class: class,
            status: AssetStatus::Candidate,
            power_mw: 0.0,
            duration_h: self.duration_h,
            rte: self.rte,
            soc_min_mwh: 0.0,
            soc_max_mwh: 0.0,
            fom_cost_per_mw_yr: self.fom_cost_per_mw_yr,
            invest_cost_energy_per_mwh_yr: self.invest_cost_energy_per_mwh_yr,
            invest_cost_power_per_mw_yr: self.invest_cost_power_per_mw_yr,
            invest_limit_power_mw: self.power_limit_mw,
            invest_limit_energy_mwh: self
                .energy_limit_mwh
                .unwrap_or(self.power_limit_mw * self.duration_h),
        }
    }
}

impl Default for StorageCandidateOptions {
    fn default() -> Self {
        StorageCandidateOptions::sdes()
    }
}

/// How raw tables become an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AssemblyOptions {
    pub imbalance_cost: f64,
    pub reserve_short_cost: f64,
    pub reserve_fraction: f64,
    /// Representatives per group; `None` keeps every unit.
    pub cluster_k: Option<usize>,
    pub mirror_renewables: bool,
    /// Per-technology totals for mirrored candidates.
    pub mirror_limits_mw: BTreeMap<String, f64>,
    pub sdes: Option<StorageCandidateOptions>,
    pub ldes: Option<StorageCandidateOptions>,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions {
            imbalance_cost: 1000.0,
            reserve_short_cost: 500.0,
            reserve_fraction: 0.15,
            cluster_k: Some(3),
            mirror_renewables: true,
            mirror_limits_mw: BTreeMap::new(),
            sdes: Some(StorageCandidateOptions::sdes()),
            ldes: Some(StorageCandidateOptions::ldes()),
        }
    }
}

pub fn assemble_instance(raw: &RawTables, options: &AssemblyOptions) -> Result<SystemInstance, PipelineError> {
    let mut generators = raw.generator_specs();
    if let Some(k) = options.cluster_k {
        generators = cluster_generators(&generators, k.max(1));
    }
    if options.mirror_renewables {
        let mirrored = mirror_candidates(&generators, &options.mirror_limits_mw);
        generators.extend(mirrored);
    }
    let mut storages = raw.storage_specs();
    if let Some(s) = &options.sdes {
        storages.push(s.spec(DurationClass::Short));
    }
    if let Some(s) = &options.ldes {
        storages.push(s.spec(DurationClass::Long));
    }
    let instance = SystemInstance {
        horizon_hours: raw.horizon(),
        reserve_req_mw: derive_reserve_requirement(&raw.demand, options.reserve_fraction),
        demand_mwh: raw.demand.clone(),
        imbalance_cost: options.imbalance_cost,
        reserve_short_cost: options.reserve_short_cost,
        generators,
        storages,
    };
    let report = validate_instance(&instance);
    if !report.is_valid() {
        return Err(PipelineError::Invalid(report));
    }
    Ok(instance)
}

/// Pretty JSON snapshot of an instance; identical instances give identical bytes.
pub fn write_snapshot(instance: &SystemInstance) -> String {
    let mut s = serde_json::to_string_pretty(instance).expect("instances serialize");
    s.push('\n');
    s
}

pub fn read_snapshot(text: &str) -> Result<SystemInstance, PipelineError> {
    let instance: SystemInstance =
        serde_json::from_str(text).map_err(|e| PipelineError::Snapshot(e.to_string()))?;
    let report = validate_instance(&instance);
    if !report.is_valid() {
        return Err(PipelineError::Invalid(report));
    }
    Ok(instance)
}
