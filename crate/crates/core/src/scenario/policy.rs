use std::collections::BTreeMap;

use crate::domain::{PolicyOverrides, StorageInvestLimit, SystemInstance};

/// Today's system as it stands: nothing built, nothing retired.
pub fn baseline_policy(instance: &SystemInstance) -> PolicyOverrides {
    let mut o = PolicyOverrides::default();
    for g in &instance.generators {
        if g.is_candidate() {
            o.generation_invest_limit_mw.insert(g.id.clone(), 0.0);
        } else if g.is_firm() {
            o.retirement.insert(g.id.clone(), (0.0, 0.0));
        }
    }
    for s in instance.storages.iter().filter(|s| s.is_candidate()) {
        o.storage_invest_limit.insert(
            s.id.clone(),
            StorageInvestLimit {
                energy_mwh: Some(0.0),
                power_mw: Some(0.0),
            },
        );
    }
    o
}

/// Gas fully retired, the given long-duration build fixed, and renewables and
/// short-duration storage free to expand within their limits. New firm
/// capacity is not allowed.
pub fn opportunity_policy(
    instance: &SystemInstance,
    ldes_power_mw: &BTreeMap<String, f64>,
) -> PolicyOverrides {
    let mut o = PolicyOverrides::default();
    for g in &instance.generators {
        if g.is_firm() && g.is_fixed() {
            let window = if g.is_gas { (1.0, 1.0) } else { (0.0, 0.0) };
            o.retirement.insert(g.id.clone(), window);
        } else if g.is_firm() && g.is_candidate() {
            o.generation_invest_limit_mw.insert(g.id.clone(), 0.0);
        }
    }
    o.ldes_fixed_power_mw = ldes_power_mw.clone();
    o
}

/// Splits a total long-duration power evenly across long-duration candidates.
pub fn split_ldes_power(instance: &SystemInstance, total_mw: f64) -> BTreeMap<String, f64> {
    let ids: Vec<&str> = instance
        .storages
        .iter()
        .filter(|s| s.is_long() && s.is_candidate())
        .map(|s| s.id.as_str())
        .collect();
    let share = total_mw / ids.len().max(1) as f64;
    ids.into_iter().map(|id| (id.to_owned(), share)).collect()
}
