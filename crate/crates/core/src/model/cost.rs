use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lp::{normalize_terms, VarId};

/// Where a dollar of system cost comes from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "category", content = "technology", rename_all = "snake_case")]
pub enum CostCategory {
    /// Energy cost of a technology.
    Generation(String),
    /// Up-reserve provision cost of a technology.
    Reserve(String),
    Imbalance,
    ReserveShortage,
    /// Fixed O&M of a technology's existing (fixed) units.
    FixedOmExisting(String),
    /// Fixed O&M of a technology's new-build capacity.
    FixedOmNew(String),
    /// Annualized investment in candidate generation.
    Investment(String),
    StorageFixedOm(String),
    StorageInvestEnergy(String),
    StorageInvestPower(String),
    /// Boundary cost times the fixed long-duration power.
    LdesOpportunityValue,
    /// Budget overrun, entered with a negative sign.
    BudgetOverrun,
}

impl CostCategory {
    /// `(category, technology)` pair for tabular output.
    pub fn parts(&self) -> (&'static str, &str) {
        use CostCategory::*;
        match self {
            Generation(t) => ("generation", t),
            Reserve(t) => ("reserve", t),
            Imbalance => ("imbalance", ""),
            ReserveShortage => ("reserve_shortage", ""),
            FixedOmExisting(t) => ("fom_existing", t),
            FixedOmNew(t) => ("fom_new", t),
            Investment(t) => ("investment", t),
            StorageFixedOm(t) => ("storage_fom", t),
            StorageInvestEnergy(t) => ("storage_invest_energy", t),
            StorageInvestPower(t) => ("storage_invest_power", t),
            LdesOpportunityValue => ("ldes_opportunity_value", ""),
            BudgetOverrun => ("budget_overrun", ""),
        }
    }
}

impl fmt::Display for CostCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parts() {
            (c, "") => f.pad(c),
            (c, t) => f.pad(&format!("{c}:{t}")),
        }
    }
}

/// Total system cost by category, in $.
pub type CostBreakdown = BTreeMap<CostCategory, f64>;

/// The system-cost expression as a list of tagged linear terms plus constants.
///
/// Kept separately from any objective so that the same expression can be the
/// baseline objective or the left side of the opportunity budget.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    pub terms: Vec<(CostCategory, VarId, f64)>,
    pub constants: Vec<(CostCategory, f64)>,
}

impl CostModel {
    pub fn add(&mut self, category: CostCategory, var: VarId, coef: f64) {
        if coef != 0.0 {
            self.terms.push((category, var, coef));
        }
    }

    pub fn add_constant(&mut self, category: CostCategory, value: f64) {
        if value != 0.0 {
            self.constants.push((category, value));
        }
    }

    /// Merged linear part, one entry per variable.
    pub fn linear_terms(&self) -> Vec<(VarId, f64)> {
        normalize_terms(self.terms.iter().map(|(_, v, a)| (*v, *a)))
    }

    pub fn constant(&self) -> f64 {
        self.constants.iter().map(|(_, c)| c).sum()
    }

    pub fn total(&self, x: &[f64]) -> f64 {
        self.constant() + self.terms.iter().map(|(_, v, a)| a * x[v.0]).sum::<f64>()
    }

    pub fn breakdown(&self, x: &[f64]) -> CostBreakdown {
        let mut out = CostBreakdown::new();
        for (cat, c) in &self.constants {
            *out.entry(cat.clone()).or_insert(0.0) += c;
        }
        for (cat, v, a) in &self.terms {
            *out.entry(cat.clone()).or_insert(0.0) += a * x[v.0];
        }
        out
    }
}
