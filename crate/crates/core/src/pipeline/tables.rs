use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::domain::{AssetStatus, GeneratorKind, GeneratorSpec, Profile, StorageSpec};

use super::PipelineError;

/// A parsed record and the line it came from (1-based, header is line 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Sourced<T> {
    pub line: usize,
    pub record: T,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct GeneratorRow {
    pub id: String,
    pub technology: String,
    #[serde(default)]
    pub region: String,
    pub kind: GeneratorKind,
    pub status: AssetStatus,
    #[serde(default)]
    pub is_gas: bool,
    #[serde(default)]
    pub provides_reserve: bool,
    pub capacity_mw: f64,
    #[serde(default)]
    pub invest_cost_per_mw_yr: f64,
    #[serde(default)]
    pub fom_cost_per_mw_yr: f64,
    #[serde(default)]
    pub gen_cost_per_mwh: f64,
    #[serde(default)]
    pub reserve_cost_per_mw: f64,
    #[serde(default)]
    pub reserve_factor: f64,
    #[serde(default = "one")]
    pub ramp_up_factor: f64,
    #[serde(default = "one")]
    pub ramp_down_factor: f64,
    #[serde(default)]
    pub invest_limit_mw: f64,
    #[serde(default)]
    pub retire_min_frac: f64,
    #[serde(default)]
    pub retire_max_frac: f64,
    /// Series id in the availability table; empty means always available.
    #[serde(default)]
    pub availability_id: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
struct DemandRow {
    hour: usize,
    mw: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
struct AvailabilityRow {
    asset_id: String,
    hour: usize,
    factor: f64,
}

/// Per-technology cost override, e.g. from a cost database.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CostRow {
    pub technology: String,
    /// One of `invest_cost_per_mw_yr`, `fom_cost_per_mw_yr`,
    /// `gen_cost_per_mwh`, `reserve_cost_per_mw`.
    pub parameter: String,
    pub value: f64,
}

const COST_PARAMETERS: [&str; 4] = [
    "invest_cost_per_mw_yr",
    "fom_cost_per_mw_yr",
    "gen_cost_per_mwh",
    "reserve_cost_per_mw",
];

/// Locations of the input tables. Optional tables may be absent.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DataPaths {
    pub generators: PathBuf,
    pub demand: PathBuf,
    pub storages: Option<PathBuf>,
    pub availability: Option<PathBuf>,
    pub costs: Option<PathBuf>,
}

impl DataPaths {
    pub fn all(&self) -> Vec<&Path> {
        let mut out = vec![self.generators.as_path(), self.demand.as_path()];
        out.extend(self.storages.as_deref());
        out.extend(self.availability.as_deref());
        out.extend(self.costs.as_deref());
        out
    }
}

/// Validated input tables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawTables {
    pub generators: Vec<Sourced<GeneratorRow>>,
    pub storages: Vec<Sourced<StorageSpec>>,
    /// Demand by hour, hour 1 first.
    pub demand: Vec<f64>,
    /// Availability series by id, hour 1 first.
    pub availability: BTreeMap<String, Arc<[f64]>>,
    pub costs: Vec<Sourced<CostRow>>,
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<Sourced<T>>, PipelineError> {
    let file = display(path);
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| PipelineError::Io {
            file: file.clone(),
            message: e.to_string(),
        })?;
    let mut out = Vec::new();
    for (i, rec) in reader.deserialize::<T>().enumerate() {
        let line = i + 2;
        let record = rec.map_err(|e| PipelineError::Parse {
            file: file.clone(),
            line: e.position().map(|p| p.line() as usize).unwrap_or(line),
            message: match e.kind() {
                csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
                _ => e.to_string(),
            },
        })?;
        out.push(Sourced { line, record });
    }
    Ok(out)
}

fn check_range(
    file: &str,
    line: usize,
    field: &str,
    value: f64,
    lo: f64,
    hi: f64,
) -> Result<(), PipelineError> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(PipelineError::Range {
            file: file.to_owned(),
            line,
            field: field.to_owned(),
            message: format!("value {value} outside [{lo}, {hi}]"),
        })
    }
}

/// Checks that `hours` (with their source lines) are exactly 1..=T.
fn dense_hours(file: &str, hours: &[(usize, usize)], expected: Option<usize>) -> Result<usize, PipelineError> {
    let mut seen = BTreeSet::new();
    for &(hour, line) in hours {
        if hour == 0 {
            return Err(PipelineError::Hours {
                file: file.to_owned(),
                line,
                message: "hours are numbered from 1".into(),
            });
        }
        if !seen.insert(hour) {
            return Err(PipelineError::Hours {
                file: file.to_owned(),
                line,
                message: format!("duplicate hour {hour}"),
            });
        }
    }
    let t = seen.len();
    if let Some(&last) = seen.iter().next_back() {
        if last != t {
            let gap = (1..=t).find(|h| !seen.contains(h)).unwrap_or(t);
            let line = hours.iter().find(|(h, _)| *h == last).map(|(_, l)| *l).unwrap_or(0);
            return Err(PipelineError::Hours {
                file: file.to_owned(),
                line,
                message: format!("hour index is sparse: hour {gap} is missing"),
            });
        }
    }
    if let Some(expected) = expected {
        if t != expected {
            return Err(PipelineError::Hours {
                file: file.to_owned(),
                line: hours.last().map(|h| h.1).unwrap_or(1),
                message: format!("series has {t} hours, demand has {expected}"),
            });
        }
    }
    Ok(t)
}

/// Reads and validates every input table.
pub fn load_system(paths: &DataPaths) -> Result<RawTables, PipelineError> {
    let demand_file = display(&paths.demand);
    let demand_rows: Vec<Sourced<DemandRow>> = read_csv(&paths.demand)?;
    let hours: Vec<(usize, usize)> = demand_rows.iter().map(|r| (r.record.hour, r.line)).collect();
    let t = dense_hours(&demand_file, &hours, None)?;
    if t == 0 {
        return Err(PipelineError::Hours {
            file: demand_file,
            line: 1,
            message: "demand table is empty".into(),
        });
    }
    let mut demand = vec![0.0; t];
    for r in &demand_rows {
        check_range(&demand_file, r.line, "mw", r.record.mw, f64::MIN, f64::MAX)?;
        demand[r.record.hour - 1] = r.record.mw;
    }

    let mut availability = BTreeMap::new();
    if let Some(path) = &paths.availability {
        let file = display(path);
        let rows: Vec<Sourced<AvailabilityRow>> = read_csv(path)?;
        let mut by_id: BTreeMap<String, Vec<&Sourced<AvailabilityRow>>> = BTreeMap::new();
        for r in &rows {
            check_range(&file, r.line, "factor", r.record.factor, 0.0, 1.0)?;
            by_id.entry(r.record.asset_id.clone()).or_default().push(r);
        }
        for (id, rows) in by_id {
            let hours: Vec<(usize, usize)> = rows.iter().map(|r| (r.record.hour, r.line)).collect();
            dense_hours(&file, &hours, Some(t))?;
            let mut series = vec![0.0; t];
            for r in rows {
                series[r.record.hour - 1] = r.record.factor;
            }
            availability.insert(id, Arc::from(series));
        }
    }

    let gen_file = display(&paths.generators);
    let generators: Vec<Sourced<GeneratorRow>> = read_csv(&paths.generators)?;
    let mut ids = BTreeSet::new();
    for r in &generators {
        let g = &r.record;
        if !ids.insert(g.id.clone()) {
            return Err(PipelineError::Reference {
                file: gen_file,
                line: r.line,
                message: format!("duplicate generator id `{}`", g.id),
            });
        }
        let big = f64::MAX;
        check_range(&gen_file, r.line, "capacity_mw", g.capacity_mw, 0.0, big)?;
        check_range(&gen_file, r.line, "invest_limit_mw", g.invest_limit_mw, 0.0, big)?;
        for (field, v) in [
            ("reserve_factor", g.reserve_factor),
            ("ramp_up_factor", g.ramp_up_factor),
            ("ramp_down_factor", g.ramp_down_factor),
            ("retire_min_frac", g.retire_min_frac),
            ("retire_max_frac", g.retire_max_frac),
        ] {
            check_range(&gen_file, r.line, field, v, 0.0, 1.0)?;
        }
        for (field, v) in [
            ("invest_cost_per_mw_yr", g.invest_cost_per_mw_yr),
            ("fom_cost_per_mw_yr", g.fom_cost_per_mw_yr),
            ("gen_cost_per_mwh", g.gen_cost_per_mwh),
            ("reserve_cost_per_mw", g.reserve_cost_per_mw),
        ] {
            check_range(&gen_file, r.line, field, v, 0.0, big)?;
        }
        if !g.availability_id.is_empty() && !availability.contains_key(&g.availability_id) {
            return Err(PipelineError::Reference {
                file: gen_file,
                line: r.line,
                message: format!(
                    "generator `{}` references unknown availability series `{}`",
                    g.id, g.availability_id
                ),
            });
        }
    }

    let storages = match &paths.storages {
        Some(path) => {
            let file = display(path);
            let rows: Vec<Sourced<StorageSpec>> = read_csv(path)?;
            for r in &rows {
                let s = &r.record;
                if !ids.insert(s.id.clone()) {
                    return Err(PipelineError::Reference {
                        file,
                        line: r.line,
                        message: format!("duplicate asset id `{}`", s.id),
                    });
                }
                check_range(&file, r.line, "rte", s.rte, f64::MIN_POSITIVE, 1.0)?;
                check_range(&file, r.line, "duration_h", s.duration_h, f64::MIN_POSITIVE, f64::MAX)?;
            }
            rows
        }
        None => Vec::new(),
    };

    let costs = match &paths.costs {
        Some(path) => {
            let file = display(path);
            let rows: Vec<Sourced<CostRow>> = read_csv(path)?;
            for r in &rows {
                if !COST_PARAMETERS.contains(&r.record.parameter.as_str()) {
                    return Err(PipelineError::Range {
                        file,
                        line: r.line,
                        field: "parameter".into(),
                        message: format!("unknown cost parameter `{}`", r.record.parameter),
                    });
                }
                check_range(&file, r.line, "value", r.record.value, 0.0, f64::MAX)?;
            }
            rows
        }
        None => Vec::new(),
    };

    Ok(RawTables {
        generators,
        storages,
        demand,
        availability,
        costs,
    })
}

impl RawTables {
    pub fn horizon(&self) -> usize {
        self.demand.len()
    }

    /// Generator specs with availability series shared by reference and
    /// per-technology cost overrides applied.
    pub fn generator_specs(&self) -> Vec<GeneratorSpec> {
        self.generators
            .iter()
            .map(|r| {
                let g = &r.record;
                let mut spec = GeneratorSpec {
                    id: g.id.clone(),
                    technology: g.technology.clone(),
                    region: g.region.clone(),
                    kind: g.kind,
                    status: g.status,
                    is_gas: g.is_gas,
                    provides_reserve: g.provides_reserve,
                    capacity_mw: g.capacity_mw,
                    invest_cost_per_mw_yr: g.invest_cost_per_mw_yr,
                    fom_cost_per_mw_yr: g.fom_cost_per_mw_yr,
                    gen_cost_per_mwh: Profile::Constant(g.gen_cost_per_mwh),
                    reserve_cost_per_mw: Profile::Constant(g.reserve_cost_per_mw),
                    availability: match self.availability.get(&g.availability_id) {
                        Some(series) => Profile::Hourly(Arc::clone(series)),
                        None => Profile::Constant(1.0),
                    },
                    reserve_factor: g.reserve_factor,
                    ramp_up_factor: g.ramp_up_factor,
                    ramp_down_factor: g.ramp_down_factor,
                    invest_limit_mw: g.invest_limit_mw,
                    retire_min_frac: g.retire_min_frac,
                    retire_max_frac: g.retire_max_frac,
                };
                for c in self.costs.iter().filter(|c| c.record.technology == g.technology) {
                    let v = c.record.value;
                    match c.record.parameter.as_str() {
                        "invest_cost_per_mw_yr" => spec.invest_cost_per_mw_yr = v,
                        "fom_cost_per_mw_yr" => spec.fom_cost_per_mw_yr = v,
                        "gen_cost_per_mwh" => spec.gen_cost_per_mwh = Profile::Constant(v),
                        "reserve_cost_per_mw" => spec.reserve_cost_per_mw = Profile::Constant(v),
                        _ => {}
                    }
                }
                spec
            })
            .collect()
    }

    pub fn storage_specs(&self) -> Vec<StorageSpec> {
        self.storages.iter().map(|r| r.record.clone()).collect()
    }
}
