//! Output tables. Each row type fixes the column order of one CSV file, and
//! the same type reads the file back.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::domain::SystemInstance;
use crate::lp::LinearProgram;
use crate::model::{CostBreakdown, CostCategory, ModelArtifacts};
use crate::scenario::{AssetSeries, SweepPoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostRow {
    pub category: String,
    pub technology: String,
    pub cost_usd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispatchRow {
    pub hour: usize,
    pub asset_id: String,
    pub kind: String,
    pub generation_mw: f64,
    pub reserve_mw: f64,
    pub charge_mw: f64,
    pub discharge_mw: f64,
    pub soc_mwh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRow {
    pub name: String,
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegistryRow {
    /// `row` or `bound`.
    pub kind: String,
    pub name: String,
    pub label: String,
    pub family: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub capacity_mw: f64,
    pub capacity_gw: f64,
    pub boundary_cost_usd_per_mw: Option<f64>,
    pub boundary_cost_usd_per_kw: Option<f64>,
    pub viable: bool,
    pub q_over: Option<f64>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvestmentRow {
    pub capacity_mw: f64,
    /// `generation`, `retirement` or `storage`.
    pub kind: String,
    pub asset: String,
    pub power_mw: f64,
    pub energy_mwh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReductionRow {
    pub capacity_mw: f64,
    pub q_star: f64,
    pub system_cost: f64,
    pub net_cost_reduction: f64,
    pub opportunity_value: f64,
    pub budget_overrun: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRow {
    pub capacity_mw: f64,
    pub category: String,
    pub technology: String,
    pub cost_usd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocRow {
    pub capacity_mw: f64,
    pub storage_id: String,
    pub hour: usize,
    pub soc_mwh: f64,
}

pub fn to_csv<T: Serialize>(rows: &[T], header: &[&str]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory write")
}

pub fn from_csv<T: DeserializeOwned>(bytes: &[u8]) -> Result<Vec<T>, csv::Error> {
    csv::Reader::from_reader(bytes).deserialize().collect()
}

pub const COST_HEADER: &[&str] = &["category", "technology", "cost_usd"];
pub const DISPATCH_HEADER: &[&str] = &[
    "hour", "asset_id", "kind", "generation_mw", "reserve_mw", "charge_mw", "discharge_mw", "soc_mwh",
];
pub const SOLUTION_HEADER: &[&str] = &["name", "label", "value"];
pub const REGISTRY_HEADER: &[&str] = &["kind", "name", "label", "family"];
pub const CURVE_HEADER: &[&str] = &[
    "capacity_mw",
    "capacity_gw",
    "boundary_cost_usd_per_mw",
    "boundary_cost_usd_per_kw",
    "viable",
    "q_over",
    "status",
];
pub const INVESTMENT_HEADER: &[&str] = &["capacity_mw", "kind", "asset", "power_mw", "energy_mwh"];
pub const COST_REDUCTION_HEADER: &[&str] = &[
    "capacity_mw",
    "q_star",
    "system_cost",
    "net_cost_reduction",
    "opportunity_value",
    "budget_overrun",
];
pub const DECOMPOSITION_HEADER: &[&str] = &["capacity_mw", "category", "technology", "cost_usd"];
pub const SOC_HEADER: &[&str] = &["capacity_mw", "storage_id", "hour", "soc_mwh"];

pub fn cost_rows(breakdown: &CostBreakdown) -> Vec<CostRow> {
    breakdown
        .iter()
        .map(|(c, v)| {
            let (category, technology) = c.parts();
            CostRow {
                category: category.into(),
                technology: technology.into(),
                cost_usd: *v,
            }
        })
        .collect()
}

/// Inverse of [`CostCategory::parts`].
pub fn parse_category(category: &str, technology: &str) -> Option<CostCategory> {
    use CostCategory::*;
    let t = technology.to_owned();
    Some(match category {
        "generation" => Generation(t),
        "reserve" => Reserve(t),
        "imbalance" => Imbalance,
        "reserve_shortage" => ReserveShortage,
        "fom_existing" => FixedOmExisting(t),
        "fom_new" => FixedOmNew(t),
        "investment" => Investment(t),
        "storage_fom" => StorageFixedOm(t),
        "storage_invest_energy" => StorageInvestEnergy(t),
        "storage_invest_power" => StorageInvestPower(t),
        "ldes_opportunity_value" => LdesOpportunityValue,
        "budget_overrun" => BudgetOverrun,
        _ => return None,
    })
}

pub fn dispatch_rows(series: &[AssetSeries]) -> Vec<DispatchRow> {
    let t_max = series.first().map_or(0, |s| s.generation_mw.len());
    let mut out = Vec::with_capacity(t_max * series.len());
    for t in 0..t_max {
        for s in series {
            out.push(DispatchRow {
                hour: t + 1,
                asset_id: s.asset_id.clone(),
                kind: s.kind.clone(),
                generation_mw: s.generation_mw[t],
                reserve_mw: s.reserve_mw[t],
                charge_mw: s.charge_mw[t],
                discharge_mw: s.discharge_mw[t],
                soc_mwh: s.soc_mwh[t],
            });
        }
    }
    out
}

pub fn solution_rows(lp: &LinearProgram, primal: &[f64]) -> Vec<SolutionRow> {
    lp.variables()
        .iter()
        .zip(primal)
        .map(|(v, x)| SolutionRow {
            name: v.name.clone(),
            label: v.label.clone(),
            value: *x,
        })
        .collect()
}

pub fn registry_rows(model: &ModelArtifacts) -> Vec<RegistryRow> {
    let mut out: Vec<RegistryRow> = model
        .lp
        .constraints()
        .iter()
        .zip(model.registry.row_families())
        .map(|(c, f)| RegistryRow {
            kind: "row".into(),
            name: c.name.clone(),
            label: c.label.clone(),
            family: f.tag().into(),
        })
        .collect();
    for (v, f) in model.registry.bound_families() {
        let var = model.lp.variable(*v);
        out.push(RegistryRow {
            kind: "bound".into(),
            name: var.name.clone(),
            label: var.label.clone(),
            family: f.tag().into(),
        });
    }
    out
}

pub fn curve_rows(points: &[SweepPoint]) -> Vec<CurveRow> {
    points
        .iter()
        .map(|p| match &p.outcome {
            Ok(b) => CurveRow {
                capacity_mw: p.ldes_power_mw,
                capacity_gw: p.ldes_power_mw / 1000.0,
                boundary_cost_usd_per_mw: Some(b.boundary_cost_per_mw),
                boundary_cost_usd_per_kw: Some(b.boundary_cost_per_kw()),
                viable: b.viable,
                q_over: Some(b.budget_overrun),
                status: "optimal".into(),
            },
            Err(e) => CurveRow {
                capacity_mw: p.ldes_power_mw,
                capacity_gw: p.ldes_power_mw / 1000.0,
                boundary_cost_usd_per_mw: None,
                boundary_cost_usd_per_kw: None,
                viable: false,
                q_over: None,
                status: format!("failed: {e}"),
            },
        })
        .collect()
}

pub fn investment_rows(points: &[SweepPoint]) -> Vec<InvestmentRow> {
    let mut out = Vec::new();
    for p in points {
        let Ok(b) = &p.outcome else { continue };
        for (tech, mw) in &b.plan.generation_mw {
            out.push(InvestmentRow {
                capacity_mw: p.ldes_power_mw,
                kind: "generation".into(),
                asset: tech.clone(),
                power_mw: *mw,
                energy_mwh: 0.0,
            });
        }
        for (tech, mw) in &b.plan.retired_mw {
            out.push(InvestmentRow {
                capacity_mw: p.ldes_power_mw,
                kind: "retirement".into(),
                asset: tech.clone(),
                power_mw: *mw,
                energy_mwh: 0.0,
            });
        }
        for s in &b.plan.storage {
            out.push(InvestmentRow {
                capacity_mw: p.ldes_power_mw,
                kind: "storage".into(),
                asset: s.id.clone(),
                power_mw: s.power_mw,
                energy_mwh: s.energy_mwh,
            });
        }
    }
    out
}

pub fn cost_reduction_rows(points: &[SweepPoint]) -> Vec<CostReductionRow> {
    points
        .iter()
        .filter_map(|p| p.outcome.as_ref().ok().map(|b| (p.ldes_power_mw, b)))
        .map(|(mw, b)| CostReductionRow {
            capacity_mw: mw,
            q_star: b.q_star,
            system_cost: b.system_cost,
            net_cost_reduction: b.net_cost_reduction,
            opportunity_value: b.boundary_cost_per_mw * mw,
            budget_overrun: b.budget_overrun,
        })
        .collect()
}

pub fn decomposition_rows(points: &[SweepPoint]) -> Vec<DecompositionRow> {
    let mut out = Vec::new();
    for p in points {
        let Ok(b) = &p.outcome else { continue };
        for r in cost_rows(&b.breakdown) {
            out.push(DecompositionRow {
                capacity_mw: p.ldes_power_mw,
                category: r.category,
                technology: r.technology,
                cost_usd: r.cost_usd,
            });
        }
    }
    out
}

/// State of charge of long-duration storage for the selected capacities
/// (all points when `selected` is empty).
pub fn soc_rows(instance: &SystemInstance, points: &[SweepPoint], selected: &[f64]) -> Vec<SocRow> {
    let long: Vec<&str> = instance
        .storages
        .iter()
        .filter(|s| s.is_long())
        .map(|s| s.id.as_str())
        .collect();
    let mut out = Vec::new();
    for p in points {
        if !selected.is_empty() && !selected.contains(&p.ldes_power_mw) {
            continue;
        }
        let Ok(b) = &p.outcome else { continue };
        let series: BTreeMap<&str, &Vec<f64>> = b
            .soc_mwh
            .iter()
            .filter(|(id, _)| long.contains(&id.as_str()))
            .map(|(id, s)| (id.as_str(), s))
            .collect();
        for (id, s) in series {
            for (t, v) in s.iter().enumerate() {
                out.push(SocRow {
                    capacity_mw: p.ldes_power_mw,
                    storage_id: id.into(),
                    hour: t + 1,
                    soc_mwh: *v,
                });
            }
        }
    }
    out
}
