use serde::{Deserialize, Serialize};

use crate::lp::VarId;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GeneratorVars {
    /// Hourly output (MW).
    pub output: Vec<VarId>,
    /// Hourly up-reserve, reserve providers only.
    pub reserve: Option<Vec<VarId>>,
    /// Capacity left after retirement, fixed firm units only.
    pub remaining: Option<VarId>,
    /// Retired capacity (MW), fixed firm units only.
    pub retired: Option<VarId>,
    /// Built capacity (MW), candidates only.
    pub invested: Option<VarId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StorageVars {
    pub charge: Vec<VarId>,
    pub discharge: Vec<VarId>,
    pub reserve: Vec<VarId>,
    pub soc: Vec<VarId>,
    /// State of charge before the first hour.
    pub soc_initial: VarId,
    pub energy_invest: Option<VarId>,
    pub power_invest: Option<VarId>,
}

/// Handles to every decision variable, indexed like the instance's assets.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VariableCatalog {
    pub generators: Vec<GeneratorVars>,
    pub storages: Vec<StorageVars>,
    pub imbalance_neg: Vec<VarId>,
    pub imbalance_pos: Vec<VarId>,
    pub reserve_shortage: Vec<VarId>,
    pub boundary_cost: Option<VarId>,
    pub budget_overrun: Option<VarId>,
}

impl VariableCatalog {
    /// Every handle in the catalog, for totality checks.
    pub fn all(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        for g in &self.generators {
            out.extend(&g.output);
            if let Some(r) = &g.reserve {
                out.extend(r);
            }
            out.extend(g.remaining);
            out.extend(g.retired);
            out.extend(g.invested);
        }
        for s in &self.storages {
            out.extend(&s.charge);
            out.extend(&s.discharge);
            out.extend(&s.reserve);
            out.extend(&s.soc);
            out.push(s.soc_initial);
            out.extend(s.energy_invest);
            out.extend(s.power_invest);
        }
        out.extend(&self.imbalance_neg);
        out.extend(&self.imbalance_pos);
        out.extend(&self.reserve_shortage);
        out.extend(self.boundary_cost);
        out.extend(self.budget_overrun);
        out
    }
}
