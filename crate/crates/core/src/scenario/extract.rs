use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::domain::SystemInstance;
use crate::model::{CostBreakdown, CostCategory, ModelArtifacts, ModelKind};

/// Hourly operation of one asset. Series that do not apply are all zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetSeries {
    pub asset_id: String,
    /// `generator` or `storage`.
    pub kind: String,
    pub generation_mw: Vec<f64>,
    pub reserve_mw: Vec<f64>,
    pub charge_mw: Vec<f64>,
    pub discharge_mw: Vec<f64>,
    pub soc_mwh: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StorageBuild {
    pub id: String,
    pub technology: String,
    pub long_duration: bool,
    pub power_mw: f64,
    pub energy_mwh: f64,
}

/// New capacity and retirements chosen by a solve.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InvestmentPlan {
    /// New generation by technology (MW).
    pub generation_mw: BTreeMap<String, f64>,
    /// Retired firm capacity by technology (MW).
    pub retired_mw: BTreeMap<String, f64>,
    pub storage: Vec<StorageBuild>,
}

pub fn extract_dispatch(
    instance: &SystemInstance,
    model: &ModelArtifacts,
    primal: &[f64],
) -> Vec<AssetSeries> {
    let t_max = instance.horizon_hours;
    let get = |ids: &[crate::lp::VarId]| ids.iter().map(|v| primal[v.0]).collect::<Vec<_>>();
    let mut out = Vec::new();
    for (g, gv) in instance.generators.iter().zip(&model.catalog.generators) {
        out.push(AssetSeries {
            asset_id: g.id.clone(),
            kind: "generator".into(),
            generation_mw: get(&gv.output),
            reserve_mw: gv.reserve.as_deref().map(get).unwrap_or_else(|| vec![0.0; t_max]),
            charge_mw: vec![0.0; t_max],
            discharge_mw: vec![0.0; t_max],
            soc_mwh: vec![0.0; t_max],
        });
    }
    for (s, sv) in instance.storages.iter().zip(&model.catalog.storages) {
        out.push(AssetSeries {
            asset_id: s.id.clone(),
            kind: "storage".into(),
            generation_mw: vec![0.0; t_max],
            reserve_mw: get(&sv.reserve),
            charge_mw: get(&sv.charge),
            discharge_mw: get(&sv.discharge),
            soc_mwh: get(&sv.soc),
        });
    }
    out
}

pub fn extract_plan(instance: &SystemInstance, model: &ModelArtifacts, primal: &[f64]) -> InvestmentPlan {
    let mut plan = InvestmentPlan::default();
    for (g, gv) in instance.generators.iter().zip(&model.catalog.generators) {
        let tech = if g.technology.is_empty() { &g.id } else { &g.technology };
        if let Some(x) = gv.invested {
            *plan.generation_mw.entry(tech.clone()).or_insert(0.0) += primal[x.0];
        }
        if let Some(x) = gv.retired {
            *plan.retired_mw.entry(tech.clone()).or_insert(0.0) += primal[x.0];
        }
    }
    for (s, sv) in instance.storages.iter().zip(&model.catalog.storages) {
        if let (Some(e), Some(p)) = (sv.energy_invest, sv.power_invest) {
            plan.storage.push(StorageBuild {
                id: s.id.clone(),
                technology: s.technology.clone(),
                long_duration: s.is_long(),
                power_mw: primal[p.0],
                energy_mwh: primal[e.0],
            });
        }
    }
    plan
}

/// Cost by category for a solved model.
///
/// For the opportunity model the opportunity value `c_bc * X` and the
/// (negated) overrun are added, so the categories sum to the left side of
/// the budget row.
pub fn decompose_costs(model: &ModelArtifacts, primal: &[f64]) -> CostBreakdown {
    let mut out = model.cost.breakdown(primal);
    if let ModelKind::Opportunity { ldes_total_mw, .. } = model.kind {
        if let Some(c) = model.catalog.boundary_cost {
            out.insert(CostCategory::LdesOpportunityValue, primal[c.0] * ldes_total_mw);
        }
        if let Some(q) = model.catalog.budget_overrun {
            if primal[q.0] != 0.0 {
                out.insert(CostCategory::BudgetOverrun, -primal[q.0]);
            }
        }
    }
    out
}
