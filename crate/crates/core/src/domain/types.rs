use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// An hourly quantity that is either constant over the horizon or given hour by hour.
///
/// Hourly profiles are reference counted so that mirrored candidates can share the
/// availability series of the unit they were cloned from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Profile {
    Constant(f64),
    Hourly(Arc<[f64]>),
}

impl Profile {
    pub fn hourly(values: Vec<f64>) -> Self {
        Profile::Hourly(values.into())
    }

    /// Value at zero-based hour `t`. Constant profiles broadcast.
    pub fn at(&self, t: usize) -> f64 {
        match self {
            Profile::Constant(v) => *v,
            Profile::Hourly(values) => values[t],
        }
    }

    /// Number of explicit entries, `None` for constants.
    pub fn explicit_len(&self) -> Option<usize> {
        match self {
            Profile::Constant(_) => None,
            Profile::Hourly(values) => Some(values.len()),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Profile::Constant(v) => *v,
            Profile::Hourly(values) if values.is_empty() => 0.0,
            Profile::Hourly(values) => values.iter().sum::<f64>() / values.len() as f64,
        }
    }

    pub fn values(&self) -> Box<dyn Iterator<Item = f64> + '_> {
        match self {
            Profile::Constant(v) => Box::new(std::iter::once(*v)),
            Profile::Hourly(values) => Box::new(values.iter().copied()),
        }
    }

    pub fn max(&self) -> f64 {
        self.values().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values().fold(f64::INFINITY, f64::min)
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Profile::Constant(_))
    }

    /// Multiplies every entry by `factor`.
    pub fn scaled(&self, factor: f64) -> Profile {
        match self {
            Profile::Constant(v) => Profile::Constant(v * factor),
            Profile::Hourly(values) => Profile::hourly(values.iter().map(|v| v * factor).collect()),
        }
    }
}

impl Default for Profile {
    fn default() -> Self {
        Profile::Constant(0.0)
    }
}

impl From<f64> for Profile {
    fn from(v: f64) -> Self {
        Profile::Constant(v)
    }
}

impl From<Vec<f64>> for Profile {
    fn from(values: Vec<f64>) -> Self {
        Profile::hourly(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Firm,
    Renewable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssetStatus {
    Fixed,
    Candidate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DurationClass {
    Short,
    Long,
}

/// A generating unit (or a cluster of units) with all of its cost and
/// operating parameters.
///
/// Fields that do not apply to a unit's class are ignored by the model:
/// `invest_limit_mw` and `invest_cost_per_mw_yr` only matter for candidates,
/// the retirement fractions only for fixed firm units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
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
    /// Installed capacity of fixed units (MW). Zero for candidates.
    #[serde(default)]
    pub capacity_mw: f64,
    /// Annualized investment cost ($/MW-yr).
    #[serde(default)]
    pub invest_cost_per_mw_yr: f64,
    /// Annual fixed O&M ($/MW-yr).
    #[serde(default)]
    pub fom_cost_per_mw_yr: f64,
    /// Marginal generation cost ($/MWh).
    #[serde(default)]
    pub gen_cost_per_mwh: Profile,
    /// Up-reserve provision cost ($/MW per hour).
    #[serde(default)]
    pub reserve_cost_per_mw: Profile,
    /// Fraction of capacity available each hour. Firm units use a constant 1.
    pub availability: Profile,
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
}

fn one() -> f64 {
    1.0
}

impl GeneratorSpec {
    /// A fixed firm unit with unit availability and no reserve or retirement options.
    pub fn firm(id: impl Into<String>, technology: impl Into<String>, capacity_mw: f64) -> Self {
        GeneratorSpec {
            id: id.into(),
            technology: technology.into(),
            region: String::new(),
            kind: GeneratorKind::Firm,
            status: AssetStatus::Fixed,
            is_gas: false,
            provides_reserve: false,
            capacity_mw,
            invest_cost_per_mw_yr: 0.0,
            fom_cost_per_mw_yr: 0.0,
            gen_cost_per_mwh: Profile::Constant(0.0),
            reserve_cost_per_mw: Profile::Constant(0.0),
            availability: Profile::Constant(1.0),
            reserve_factor: 0.0,
            ramp_up_factor: 1.0,
            ramp_down_factor: 1.0,
            invest_limit_mw: 0.0,
            retire_min_frac: 0.0,
            retire_max_frac: 0.0,
        }
    }

    /// A fixed renewable unit following `availability`.
    pub fn renewable(
        id: impl Into<String>,
        technology: impl Into<String>,
        capacity_mw: f64,
        availability: impl Into<Profile>,
    ) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::Renewable,
            availability: availability.into(),
            ..GeneratorSpec::firm(id, technology, capacity_mw)
        }
    }

    pub fn is_candidate(&self) -> bool {
        self.status == AssetStatus::Candidate
    }

    pub fn is_fixed(&self) -> bool {
        self.status == AssetStatus::Fixed
    }

    pub fn is_firm(&self) -> bool {
        self.kind == GeneratorKind::Firm
    }

    pub fn is_renewable(&self) -> bool {
        self.kind == GeneratorKind::Renewable
    }
}

/// A storage system, existing or candidate.
///
/// For candidates `power_mw` and `soc_max_mwh` hold the capacity already in
/// place before any investment (usually zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StorageSpec {
    pub id: String,
    #[serde(default)]
    pub technology: String,
    pub duration_class: DurationClass,
    pub status: AssetStatus,
    #[serde(default)]
    pub power_mw: f64,
    pub duration_h: f64,
    pub rte: f64,
    #[serde(default)]
    pub soc_min_mwh: f64,
    #[serde(default)]
    pub soc_max_mwh: f64,
    #[serde(default)]
    pub fom_cost_per_mw_yr: f64,
    #[serde(default)]
    pub invest_cost_energy_per_mwh_yr: f64,
    #[serde(default)]
    pub invest_cost_power_per_mw_yr: f64,
    #[serde(default)]
    pub invest_limit_power_mw: f64,
    #[serde(default)]
    pub invest_limit_energy_mwh: f64,
}

impl StorageSpec {
    pub fn is_candidate(&self) -> bool {
        self.status == AssetStatus::Candidate
    }

    pub fn is_fixed(&self) -> bool {
        self.status == AssetStatus::Fixed
    }

    pub fn is_long(&self) -> bool {
        self.duration_class == DurationClass::Long
    }
}

/// Everything the capacity model needs for one target-year horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemInstance {
    pub horizon_hours: usize,
    pub demand_mwh: Vec<f64>,
    pub reserve_req_mw: Vec<f64>,
    /// $/MWh of positive or negative imbalance.
    pub imbalance_cost: f64,
    /// $/MW of unmet up-reserve per hour.
    pub reserve_short_cost: f64,
    pub generators: Vec<GeneratorSpec>,
    pub storages: Vec<StorageSpec>,
}

impl SystemInstance {
    pub fn generator(&self, id: &str) -> Option<&GeneratorSpec> {
        self.generators.iter().find(|g| g.id == id)
    }

    pub fn storage(&self, id: &str) -> Option<&StorageSpec> {
        self.storages.iter().find(|s| s.id == id)
    }

    /// Largest absolute cost coefficient appearing anywhere in the instance.
    pub fn max_cost_coefficient(&self) -> f64 {
        let mut m = self.imbalance_cost.abs().max(self.reserve_short_cost.abs());
        for g in &self.generators {
            m = m
                .max(g.invest_cost_per_mw_yr.abs())
                .max(g.fom_cost_per_mw_yr.abs())
                .max(g.gen_cost_per_mwh.max().abs())
                .max(g.gen_cost_per_mwh.min().abs())
                .max(g.reserve_cost_per_mw.max().abs())
                .max(g.reserve_cost_per_mw.min().abs());
        }
        for s in &self.storages {
            m = m
                .max(s.fom_cost_per_mw_yr.abs())
                .max(s.invest_cost_energy_per_mwh_yr.abs())
                .max(s.invest_cost_power_per_mw_yr.abs());
        }
        m
    }

    /// Multiplies every monetary parameter by `factor`. Physical quantities are untouched.
    pub fn with_costs_scaled(&self, factor: f64) -> SystemInstance {
        let mut out = self.clone();
        out.imbalance_cost *= factor;
        out.reserve_short_cost *= factor;
        for g in &mut out.generators {
            g.invest_cost_per_mw_yr *= factor;
            g.fom_cost_per_mw_yr *= factor;
            g.gen_cost_per_mwh = g.gen_cost_per_mwh.scaled(factor);
            g.reserve_cost_per_mw = g.reserve_cost_per_mw.scaled(factor);
        }
        for s in &mut out.storages {
            s.fom_cost_per_mw_yr *= factor;
            s.invest_cost_energy_per_mwh_yr *= factor;
            s.invest_cost_power_per_mw_yr *= factor;
        }
        out
    }
}

/// Per-asset adjustments applied on top of an instance when a model is built.
///
/// Every map is keyed by asset id; absent entries fall back to the instance's
/// own parameters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PolicyOverrides {
    /// Replacement investment cap (MW) for candidate generators.
    #[serde(default)]
    pub generation_invest_limit_mw: BTreeMap<String, f64>,
    /// Replacement caps for candidate storage.
    #[serde(default)]
    pub storage_invest_limit: BTreeMap<String, StorageInvestLimit>,
    /// Replacement `(min, max)` retirement fractions for fixed firm units.
    #[serde(default)]
    pub retirement: BTreeMap<String, (f64, f64)>,
    /// Predefined power capacity (MW) of long-duration candidates. The matching
    /// energy capacity is power times duration.
    #[serde(default)]
    pub ldes_fixed_power_mw: BTreeMap<String, f64>,
    /// Penalty per $ of budget overrun. `None` picks a default from the instance.
    #[serde(default)]
    pub overrun_penalty: Option<f64>,
    /// Optional lower bound on the boundary cost variable. `None` leaves it free.
    #[serde(default)]
    pub boundary_cost_floor: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StorageInvestLimit {
    pub energy_mwh: Option<f64>,
    pub power_mw: Option<f64>,
}

impl PolicyOverrides {
    pub fn invest_limit(&self, g: &GeneratorSpec) -> f64 {
        self.generation_invest_limit_mw
            .get(&g.id)
            .copied()
            .unwrap_or(g.invest_limit_mw)
    }

    pub fn retirement_window(&self, g: &GeneratorSpec) -> (f64, f64) {
        self.retirement
            .get(&g.id)
            .copied()
            .unwrap_or((g.retire_min_frac, g.retire_max_frac))
    }

    pub fn storage_energy_limit(&self, s: &StorageSpec) -> f64 {
        self.storage_invest_limit
            .get(&s.id)
            .and_then(|l| l.energy_mwh)
            .unwrap_or(s.invest_limit_energy_mwh)
    }

    pub fn storage_power_limit(&self, s: &StorageSpec) -> f64 {
        self.storage_invest_limit
            .get(&s.id)
            .and_then(|l| l.power_mw)
            .unwrap_or(s.invest_limit_power_mw)
    }
}
