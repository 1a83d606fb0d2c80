//! The capacity-expansion LP: variables, constraint blocks, the system-cost
//! expression, and the two model variants built from them.
//!
//! * The baseline model minimizes total system cost.
//! * The opportunity model holds a given long-duration storage build fixed and
//!   maximizes the per-MW cost `c_bc` that storage could carry while keeping
//!   the system no more expensive than the baseline optimum `q*`:
//!
//! ```text
//! max  c_bc - C_over * q_over
//! s.t. X * c_bc + system_cost(x) - q_over <= q*
//! ```
//!
//! where `X` is the total fixed long-duration power.

mod builder;
mod catalog;
mod cost;
mod registry;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{PolicyOverrides, SystemInstance, ValidationReport};
use crate::lp::{LinearProgram, LpError, Relation, Sense};

pub use builder::{
    add_balance_block, add_generator_block, add_reserve_block, add_storage_block, ModelBuilder,
};
pub use catalog::{GeneratorVars, StorageVars, VariableCatalog};
pub use cost::{CostBreakdown, CostCategory, CostModel};
pub use registry::{ConstraintFamily, ConstraintRegistry};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid instance:\n{0}")]
    InvalidInstance(ValidationReport),
    #[error("invalid policy overrides:\n{0}")]
    InvalidOverrides(ValidationReport),
    #[error("unbounded boundary cost: zero LDES quantity")]
    ZeroLdesQuantity,
    #[error("{0}")]
    NotFinite(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Baseline,
    Opportunity {
        q_star: f64,
        /// Total fixed long-duration power (MW).
        ldes_total_mw: f64,
        overrun_penalty: f64,
    },
}

/// A built model with everything needed to interpret its solutions.
#[derive(Debug, Clone)]
pub struct ModelArtifacts {
    pub lp: LinearProgram,
    pub catalog: VariableCatalog,
    pub registry: ConstraintRegistry,
    pub cost: CostModel,
    pub kind: ModelKind,
}

/// A storage-hour where charging and discharging are both positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimultaneousUse {
    pub storage: String,
    pub hour: usize,
    pub charge_mw: f64,
    pub discharge_mw: f64,
}

impl ModelArtifacts {
    /// Total system cost of a primal point (excludes the opportunity terms).
    pub fn system_cost(&self, primal: &[f64]) -> f64 {
        self.cost.total(primal)
    }

    /// Storage-hours with simultaneous charge and discharge above `tol`.
    ///
    /// The model does not forbid this; with a lossy round trip it can be a
    /// cheap way to burn surplus energy, so it is reported rather than hidden.
    pub fn simultaneous_use(
        &self,
        instance: &SystemInstance,
        primal: &[f64],
        tol: f64,
    ) -> Vec<SimultaneousUse> {
        let mut out = Vec::new();
        for (h, hv) in instance.storages.iter().zip(&self.catalog.storages) {
            for t in 0..hv.charge.len() {
                let (c, d) = (primal[hv.charge[t].0], primal[hv.discharge[t].0]);
                if c > tol && d > tol {
                    out.push(SimultaneousUse {
                        storage: h.id.clone(),
                        hour: t + 1,
                        charge_mw: c,
                        discharge_mw: d,
                    });
                }
            }
        }
        out
    }

    /// A point that satisfies every row and bound without optimizing anything.
    ///
    /// Nothing runs, all demand is covered by imbalance and all reserve by
    /// shortage; storage sits at its minimum state of charge. For the
    /// opportunity model `c_bc` sits at its floor (or zero) and `q_over`
    /// absorbs whatever the budget row needs.
    pub fn reference_point(&self, instance: &SystemInstance) -> Vec<f64> {
        let lp = &self.lp;
        let mut x: Vec<f64> = lp
            .variables()
            .iter()
            .map(|v| if v.lower.is_finite() { v.lower } else { 0.0f64.min(v.upper) })
            .collect();
        for (g, gv) in instance.generators.iter().zip(&self.catalog.generators) {
            if let (Some(rem), Some(ret)) = (gv.remaining, gv.retired) {
                x[rem.0] = g.capacity_mw - x[ret.0];
            }
        }
        for t in 0..instance.horizon_hours {
            let d = instance.demand_mwh[t];
            x[self.catalog.imbalance_neg[t].0] = d.max(0.0);
            x[self.catalog.imbalance_pos[t].0] = (-d).max(0.0);
            x[self.catalog.reserve_shortage[t].0] = instance.reserve_req_mw[t].max(0.0);
        }
        if let (Some(q), Some(budget)) = (
            self.catalog.budget_overrun,
            self.registry.rows_of(ConstraintFamily::OpportunityBudget).next(),
        ) {
            x[q.0] = 0.0;
            let row = lp.constraint(budget);
            x[q.0] = (row.activity(&x) - row.rhs).max(0.0);
        }
        x
    }
}

fn assemble(mut b: ModelBuilder<'_>) -> Result<ModelBuilder<'_>, ModelError> {
    add_balance_block(&mut b)?;
    add_reserve_block(&mut b)?;
    add_storage_block(&mut b)?;
    add_generator_block(&mut b)?;
    Ok(b)
}

/// Minimum-cost capacity expansion and dispatch.
pub fn build_baseline_model(
    instance: &SystemInstance,
    overrides: &PolicyOverrides,
) -> Result<ModelArtifacts, ModelError> {
    let b = ModelBuilder::new(instance, overrides, "BASELINE", Sense::Minimize, false)?;
    let mut b = assemble(b)?;
    for (v, a) in b.cost.linear_terms() {
        b.lp.set_cost(v, a)?;
    }
    b.lp.objective_constant = b.cost.constant();
    Ok(ModelArtifacts {
        lp: b.lp,
        catalog: b.catalog,
        registry: b.registry,
        cost: b.cost,
        kind: ModelKind::Baseline,
    })
}

/// Total predefined long-duration power (MW) across long-duration candidates.
pub fn ldes_total_mw(instance: &SystemInstance, overrides: &PolicyOverrides) -> f64 {
    instance
        .storages
        .iter()
        .filter(|s| s.is_long() && s.is_candidate())
        .filter_map(|s| overrides.ldes_fixed_power_mw.get(&s.id))
        .sum()
}

/// Penalty on budget overrun when none is configured.
///
/// Any penalty above `1 / X` makes overrun strictly worse than lowering
/// `c_bc`; the margin of 1e6 over the larger of that and the biggest cost
/// coefficient keeps the preference robust to solver tolerances.
pub fn default_overrun_penalty(instance: &SystemInstance, ldes_total_mw: f64) -> f64 {
    1e6 * instance.max_cost_coefficient().max(1.0 / ldes_total_mw).max(1.0)
}

/// Boundary-cost maximization against the baseline optimum `q_star`.
///
/// Long-duration candidates listed in `overrides.ldes_fixed_power_mw` are
/// fixed at that power (energy = power x duration); unlisted ones are held
/// at zero.
pub fn build_opportunity_model(
    instance: &SystemInstance,
    overrides: &PolicyOverrides,
    q_star: f64,
) -> Result<ModelArtifacts, ModelError> {
    if !q_star.is_finite() {
        return Err(ModelError::NotFinite(format!("baseline optimum q* = {q_star}")));
    }
    let b = ModelBuilder::new(instance, overrides, "OPPORTUN", Sense::Maximize, true)?;
    let total = ldes_total_mw(instance, overrides);
    if total <= 0.0 {
        return Err(ModelError::ZeroLdesQuantity);
    }
    let penalty = overrides
        .overrun_penalty
        .unwrap_or_else(|| default_overrun_penalty(instance, total));
    let mut b = assemble(b)?;
    let floor = overrides.boundary_cost_floor.unwrap_or(f64::NEG_INFINITY);
    let c_bc = b.var("c_bc".into(), floor, f64::INFINITY, None)?;
    let q_over = b.var("q_over".into(), 0.0, f64::INFINITY, None)?;
    b.catalog.boundary_cost = Some(c_bc);
    b.catalog.budget_overrun = Some(q_over);
    let mut terms = b.cost.linear_terms();
    terms.push((c_bc, total));
    terms.push((q_over, -1.0));
    let rhs = q_star - b.cost.constant();
    b.row(
        ConstraintFamily::OpportunityBudget,
        "budget".into(),
        terms,
        Relation::Le,
        rhs,
    )?;
    b.lp.set_cost(c_bc, 1.0)?;
    b.lp.set_cost(q_over, -penalty)?;
    Ok(ModelArtifacts {
        lp: b.lp,
        catalog: b.catalog,
        registry: b.registry,
        cost: b.cost,
        kind: ModelKind::Opportunity {
            q_star,
            ldes_total_mw: total,
            overrun_penalty: penalty,
        },
    })
}
