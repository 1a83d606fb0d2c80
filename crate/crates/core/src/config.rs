//! Run configuration, read from TOML.
//!
//! ```toml
//! [data]
//! generators = "generators.csv"   # paths are relative to this file
//! demand = "demand.csv"
//! availability = "availability.csv"
//!
//! [system]
//! reserve_fraction = 0.15
//!
//! [sweep]
//! capacities_mw = [5000, 8700, 17000]
//! ```
//!
//! Instead of CSV tables, `[data] snapshot = "instance.json"` loads a
//! serialized instance directly.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::SystemInstance;
use crate::lp::SolverConfig;
use crate::pipeline::{
    assemble_instance, load_system, read_snapshot, AssemblyOptions, DataPaths, PipelineError,
    StorageCandidateOptions,
};
use crate::scenario::ScenarioOptions;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    pub generators: Option<PathBuf>,
    pub demand: Option<PathBuf>,
    pub storages: Option<PathBuf>,
    pub availability: Option<PathBuf>,
    pub costs: Option<PathBuf>,
    pub snapshot: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSection {
    pub imbalance_cost: f64,
    pub reserve_short_cost: f64,
    pub reserve_fraction: f64,
}

impl Default for SystemSection {
    fn default() -> Self {
        SystemSection {
            imbalance_cost: 1000.0,
            reserve_short_cost: 500.0,
            reserve_fraction: 0.15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusteringSection {
    pub enabled: bool,
    pub k_per_group: usize,
}

impl Default for ClusteringSection {
    fn default() -> Self {
        ClusteringSection {
            enabled: true,
            k_per_group: 3,
        }
    }
}

/// Overrides on top of a storage-candidate preset; unset fields keep the preset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StorageCandidateSection {
    pub enabled: Option<bool>,
    pub id: Option<String>,
    pub technology: Option<String>,
    pub duration_h: Option<f64>,
    pub rte: Option<f64>,
    pub power_limit_mw: Option<f64>,
    pub energy_limit_mwh: Option<f64>,
    pub fom_cost_per_mw_yr: Option<f64>,
    pub invest_cost_energy_per_mwh_yr: Option<f64>,
    pub invest_cost_power_per_mw_yr: Option<f64>,
}

impl StorageCandidateSection {
    pub fn resolve(&self, preset: StorageCandidateOptions) -> Option<StorageCandidateOptions> {
        if self.enabled == Some(false) {
            return None;
        }
        let p = preset;
        Some(StorageCandidateOptions {
            id: self.id.clone().unwrap_or(p.id),
            technology: self.technology.clone().unwrap_or(p.technology),
            duration_h: self.duration_h.unwrap_or(p.duration_h),
            rte: self.rte.unwrap_or(p.rte),
            power_limit_mw: self.power_limit_mw.unwrap_or(p.power_limit_mw),
            energy_limit_mwh: self.energy_limit_mwh.or(p.energy_limit_mwh),
            fom_cost_per_mw_yr: self.fom_cost_per_mw_yr.unwrap_or(p.fom_cost_per_mw_yr),
            invest_cost_energy_per_mwh_yr: self
                .invest_cost_energy_per_mwh_yr
                .unwrap_or(p.invest_cost_energy_per_mwh_yr),
            invest_cost_power_per_mw_yr: self
                .invest_cost_power_per_mw_yr
                .unwrap_or(p.invest_cost_power_per_mw_yr),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CandidatesSection {
    pub mirror_renewables: bool,
    pub mirror_limits_mw: BTreeMap<String, f64>,
    pub sdes: StorageCandidateSection,
    pub ldes: StorageCandidateSection,
}

impl Default for CandidatesSection {
    fn default() -> Self {
        CandidatesSection {
            mirror_renewables: true,
            mirror_limits_mw: BTreeMap::new(),
            sdes: StorageCandidateSection::default(),
            ldes: StorageCandidateSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub capacities_mw: Vec<f64>,
    pub workers: usize,
    /// Refine the minimum viable capacity by bisection.
    pub bisect: bool,
    pub bisection_tol_mw: f64,
    /// Capacities whose state-of-charge series are written out; empty means all.
    pub soc_points_mw: Vec<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            capacities_mw: Vec::new(),
            workers: 1,
            bisect: false,
            bisection_tol_mw: 100.0,
            soc_points_mw: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicySection {
    pub overrun_penalty: Option<f64>,
    pub boundary_cost_floor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub data: DataSection,
    #[serde(default)]
    pub system: SystemSection,
    #[serde(default)]
    pub clustering: ClusteringSection,
    #[serde(default)]
    pub candidates: CandidatesSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub policy: PolicySection,
    /// Directory that relative data paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// Either a set of CSV tables or a snapshot.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Tables(DataPaths),
    Snapshot(PathBuf),
}

impl InputSource {
    pub fn files(&self) -> Vec<PathBuf> {
        match self {
            InputSource::Tables(p) => p.all().into_iter().map(Path::to_path_buf).collect(),
            InputSource::Snapshot(p) => vec![p.clone()],
        }
    }
}

impl Config {
    pub fn from_toml(text: &str, base_dir: impl Into<PathBuf>) -> Result<Config, ConfigError> {
        let mut cfg: Config = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: "<config>".into(),
            message: e.to_string(),
        })?;
        cfg.base_dir = base_dir.into();
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Config::from_toml(&text, base).map_err(|e| match e {
            ConfigError::Parse { message, .. } => ConfigError::Parse {
                path: path.display().to_string(),
                message,
            },
            other => other,
        })
    }

    fn check(&self) -> Result<(), ConfigError> {
        let d = &self.data;
        match (&d.snapshot, &d.generators, &d.demand) {
            (Some(_), None, None) => {}
            (None, Some(_), Some(_)) => {}
            (Some(_), _, _) => {
                return Err(ConfigError::Invalid(
                    "[data] takes either `snapshot` or CSV tables, not both".into(),
                ))
            }
            _ => {
                return Err(ConfigError::Invalid(
                    "[data] needs `generators` and `demand` (or `snapshot`)".into(),
                ))
            }
        }
        if self.system.reserve_fraction < 0.0 {
            return Err(ConfigError::Invalid("system.reserve_fraction must be >= 0".into()));
        }
        if self.clustering.enabled && self.clustering.k_per_group == 0 {
            return Err(ConfigError::Invalid("clustering.k_per_group must be >= 1".into()));
        }
        Ok(())
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn input_source(&self) -> InputSource {
        let d = &self.data;
        if let Some(s) = &d.snapshot {
            return InputSource::Snapshot(self.resolve(s));
        }
        InputSource::Tables(DataPaths {
            generators: self.resolve(d.generators.as_deref().expect("checked on load")),
            demand: self.resolve(d.demand.as_deref().expect("checked on load")),
            storages: d.storages.as_deref().map(|p| self.resolve(p)),
            availability: d.availability.as_deref().map(|p| self.resolve(p)),
            costs: d.costs.as_deref().map(|p| self.resolve(p)),
        })
    }

    pub fn assembly_options(&self) -> AssemblyOptions {
        let c = &self.candidates;
        AssemblyOptions {
            imbalance_cost: self.system.imbalance_cost,
            reserve_short_cost: self.system.reserve_short_cost,
            reserve_fraction: self.system.reserve_fraction,
            cluster_k: self.clustering.enabled.then_some(self.clustering.k_per_group),
            mirror_renewables: c.mirror_renewables,
            mirror_limits_mw: c.mirror_limits_mw.clone(),
            sdes: c.sdes.resolve(StorageCandidateOptions::sdes()),
            ldes: c.ldes.resolve(StorageCandidateOptions::ldes()),
        }
    }

    pub fn scenario_options(&self) -> ScenarioOptions {
        ScenarioOptions {
            solver: self.solver.clone(),
            workers: self.sweep.workers,
            overrun_penalty: self.policy.overrun_penalty,
            boundary_cost_floor: self.policy.boundary_cost_floor,
        }
    }

    /// Loads the inputs and builds the instance.
    pub fn instance(&self) -> Result<SystemInstance, PipelineError> {
        match self.input_source() {
            InputSource::Snapshot(path) => {
                let text = fs::read_to_string(&path).map_err(|e| PipelineError::Io {
                    file: path.display().to_string(),
                    message: e.to_string(),
                })?;
                read_snapshot(&text)
            }
            InputSource::Tables(paths) => {
                let raw = load_system(&paths)?;
                assemble_instance(&raw, &self.assembly_options())
            }
        }
    }
}
