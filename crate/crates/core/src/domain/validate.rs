use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::types::{PolicyOverrides, Profile, SystemInstance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Asset id, or `None` for system-level fields.
    pub asset: Option<String>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.asset {
            Some(id) => write!(f, "{}.{}: {}", id, self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

/// Every invariant violation found in an instance. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn mentions(&self, asset: &str, field: &str) -> bool {
        self.violations
            .iter()
            .any(|v| v.asset.as_deref() == Some(asset) && v.field == field)
    }

    fn push(&mut self, asset: Option<&str>, field: &str, message: impl Into<String>) {
        self.violations.push(Violation {
            asset: asset.map(str::to_owned),
            field: field.to_owned(),
            message: message.into(),
        });
    }

    fn nonneg(&mut self, asset: Option<&str>, field: &str, v: f64) {
        if !v.is_finite() || v < 0.0 {
            self.push(asset, field, format!("must be finite and >= 0, got {v}"));
        }
    }

    fn unit(&mut self, asset: Option<&str>, field: &str, v: f64) {
        if !(0.0..=1.0).contains(&v) {
            self.push(asset, field, format!("must lie in [0, 1], got {v}"));
        }
    }

    fn profile(&mut self, asset: &str, field: &str, p: &Profile, horizon: usize, unit_range: bool) {
        if let Some(len) = p.explicit_len() {
            if len != horizon {
                self.push(
                    Some(asset),
                    field,
                    format!("series length {len} does not match horizon {horizon}"),
                );
                return;
            }
        }
        for (t, v) in p.values().enumerate() {
            let ok = if unit_range {
                (0.0..=1.0).contains(&v)
            } else {
                v.is_finite() && v >= 0.0
            };
            if !ok {
                let range = if unit_range { "[0, 1]" } else { "[0, inf)" };
                self.push(Some(asset), field, format!("value {v} at hour {} outside {range}", t + 1));
                return;
            }
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate_instance(instance: &SystemInstance) -> ValidationReport {
    let mut r = ValidationReport::default();
    let horizon = instance.horizon_hours;
    if horizon == 0 {
        r.push(None, "horizon_hours", "at least one time period is required");
    }
    for (field, series) in [
        ("demand_mwh", &instance.demand_mwh),
        ("reserve_req_mw", &instance.reserve_req_mw),
    ] {
        if series.len() != horizon {
            r.push(
                None,
                field,
                format!("series length {} does not match horizon {horizon}", series.len()),
            );
        }
        if let Some(v) = series.iter().find(|v| !v.is_finite()) {
            r.push(None, field, format!("non-finite value {v}"));
        }
    }
    if let Some(v) = instance.reserve_req_mw.iter().find(|v| **v < 0.0) {
        r.push(None, "reserve_req_mw", format!("negative requirement {v}"));
    }
    r.nonneg(None, "imbalance_cost", instance.imbalance_cost);
    r.nonneg(None, "reserve_short_cost", instance.reserve_short_cost);

    let mut seen = HashSet::new();
    for g in &instance.generators {
        let id = g.id.as_str();
        let a = Some(id);
        if id.is_empty() {
            r.push(None, "generators.id", "empty generator id");
        }
        if !seen.insert(id) {
            r.push(a, "id", "duplicate generator id");
        }
        r.nonneg(a, "capacity_mw", g.capacity_mw);
        r.nonneg(a, "invest_cost_per_mw_yr", g.invest_cost_per_mw_yr);
        r.nonneg(a, "fom_cost_per_mw_yr", g.fom_cost_per_mw_yr);
        r.profile(id, "gen_cost_per_mwh", &g.gen_cost_per_mwh, horizon, false);
        r.profile(id, "reserve_cost_per_mw", &g.reserve_cost_per_mw, horizon, false);
        r.profile(id, "availability", &g.availability, horizon, true);
        r.unit(a, "reserve_factor", g.reserve_factor);
        r.unit(a, "ramp_up_factor", g.ramp_up_factor);
        r.unit(a, "ramp_down_factor", g.ramp_down_factor);
        r.unit(a, "retire_min_frac", g.retire_min_frac);
        r.unit(a, "retire_max_frac", g.retire_max_frac);
        if g.retire_min_frac > g.retire_max_frac {
            r.push(a, "retire_min_frac", "exceeds retire_max_frac");
        }
        if g.is_candidate() {
            r.nonneg(a, "invest_limit_mw", g.invest_limit_mw);
        }
        if g.is_gas && !(g.is_firm() && g.is_fixed()) {
            r.push(a, "is_gas", "gas units must be firm and fixed");
        }
    }

    let mut seen = HashSet::new();
    for s in &instance.storages {
        let id = s.id.as_str();
        let a = Some(id);
        if id.is_empty() {
            r.push(None, "storages.id", "empty storage id");
        }
        if !seen.insert(id) {
            r.push(a, "id", "duplicate storage id");
        }
        if !(s.rte > 0.0 && s.rte <= 1.0) {
            r.push(a, "rte", format!("must lie in (0, 1], got {}", s.rte));
        }
        if !(s.duration_h.is_finite() && s.duration_h > 0.0) {
            r.push(a, "duration_h", format!("must be > 0, got {}", s.duration_h));
        }
        r.nonneg(a, "soc_min_mwh", s.soc_min_mwh);
        r.nonneg(a, "soc_max_mwh", s.soc_max_mwh);
        if s.soc_min_mwh > s.soc_max_mwh {
            r.push(a, "soc_min_mwh", "exceeds soc_max_mwh");
        }
        r.nonneg(a, "power_mw", s.power_mw);
        r.nonneg(a, "fom_cost_per_mw_yr", s.fom_cost_per_mw_yr);
        r.nonneg(a, "invest_cost_energy_per_mwh_yr", s.invest_cost_energy_per_mwh_yr);
        r.nonneg(a, "invest_cost_power_per_mw_yr", s.invest_cost_power_per_mw_yr);
        r.nonneg(a, "invest_limit_power_mw", s.invest_limit_power_mw);
        r.nonneg(a, "invest_limit_energy_mwh", s.invest_limit_energy_mwh);
    }
    r
}

/// Checks override values against the instance they will be applied to.
pub fn validate_overrides(instance: &SystemInstance, overrides: &PolicyOverrides) -> ValidationReport {
    let mut r = ValidationReport::default();
    for (id, v) in &overrides.generation_invest_limit_mw {
        if instance.generator(id).is_none() {
            r.push(Some(id), "generation_invest_limit_mw", "unknown generator");
        }
        r.nonneg(Some(id), "generation_invest_limit_mw", *v);
    }
    for (id, limit) in &overrides.storage_invest_limit {
        if instance.storage(id).is_none() {
            r.push(Some(id), "storage_invest_limit", "unknown storage");
        }
        if let Some(v) = limit.energy_mwh {
            r.nonneg(Some(id), "storage_invest_limit.energy_mwh", v);
        }
        if let Some(v) = limit.power_mw {
            r.nonneg(Some(id), "storage_invest_limit.power_mw", v);
        }
    }
    for (id, (lo, hi)) in &overrides.retirement {
        if instance.generator(id).is_none() {
            r.push(Some(id), "retirement", "unknown generator");
        }
        r.unit(Some(id), "retirement.min", *lo);
        r.unit(Some(id), "retirement.max", *hi);
        if lo > hi {
            r.push(Some(id), "retirement", "min exceeds max");
        }
    }
    for (id, v) in &overrides.ldes_fixed_power_mw {
        match instance.storage(id) {
            Some(s) if s.is_long() && s.is_candidate() => {}
            Some(_) => r.push(Some(id), "ldes_fixed_power_mw", "not a long-duration candidate"),
            None => r.push(Some(id), "ldes_fixed_power_mw", "unknown storage"),
        }
        r.nonneg(Some(id), "ldes_fixed_power_mw", *v);
    }
    if let Some(c) = overrides.overrun_penalty {
        if !(c.is_finite() && c > 0.0) {
            r.push(None, "overrun_penalty", format!("must be > 0, got {c}"));
        }
    }
    r
}
