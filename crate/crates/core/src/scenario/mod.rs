//! Sequential solution framework: baseline solve for `q*`, then opportunity
//! solves over a sweep of long-duration storage capacities.

mod extract;
mod policy;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::SystemInstance;
use crate::lp::{solve, SolveError, SolveStatus, SolverConfig};
use crate::model::{
    build_baseline_model, build_opportunity_model, CostBreakdown, ModelArtifacts, ModelError,
    SimultaneousUse,
};

pub use extract::{
    decompose_costs, extract_dispatch, extract_plan, AssetSeries, InvestmentPlan, StorageBuild,
};
pub use policy::{baseline_policy, opportunity_policy, split_ldes_power};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("{stage} solve ended with status {status:?}{}", .diagnostics.as_deref().map(|d| format!(": {d}")).unwrap_or_default())]
    NotOptimal {
        stage: &'static str,
        status: SolveStatus,
        diagnostics: Option<String>,
    },
    #[error("instance has no long-duration storage candidate")]
    NoLdesCandidate,
    #[error("invalid capacity list: {0}")]
    InvalidCapacities(String),
}

/// Settings shared by every solve in a scenario run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioOptions {
    pub solver: SolverConfig,
    /// Parallel sweep points; 0 uses all cores.
    pub workers: usize,
    pub overrun_penalty: Option<f64>,
    pub boundary_cost_floor: Option<f64>,
}

impl Default for ScenarioOptions {
    fn default() -> Self {
        ScenarioOptions {
            solver: SolverConfig::default(),
            workers: 1,
            overrun_penalty: None,
            boundary_cost_floor: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BaselineResult {
    pub q_star: f64,
    pub breakdown: CostBreakdown,
    pub primal: Vec<f64>,
    pub dispatch: Vec<AssetSeries>,
    pub simultaneous_use: Vec<SimultaneousUse>,
    pub model: ModelArtifacts,
    pub solve_time_s: f64,
}

/// One solved point on the boundary-cost curve.
#[derive(Debug, Clone)]
pub struct BoundaryCurvePoint {
    pub ldes_power_mw: f64,
    pub q_star: f64,
    /// Boundary cost `c_bc` ($/MW-yr).
    pub boundary_cost_per_mw: f64,
    pub budget_overrun: f64,
    pub viable: bool,
    /// `q*` minus every budget-row term except the boundary-cost term.
    pub net_cost_reduction: f64,
    /// System cost of the opportunity solution, without `c_bc`.
    pub system_cost: f64,
    pub plan: InvestmentPlan,
    pub breakdown: CostBreakdown,
    /// State-of-charge series per storage id.
    pub soc_mwh: BTreeMap<String, Vec<f64>>,
    pub primal: Vec<f64>,
    pub model: ModelArtifacts,
    pub solve_time_s: f64,
}

impl BoundaryCurvePoint {
    pub fn boundary_cost_per_kw(&self) -> f64 {
        self.boundary_cost_per_mw / 1000.0
    }

    /// Left side of the budget row.
    pub fn budget_lhs(&self) -> f64 {
        self.breakdown.values().sum()
    }
}

/// Result of one sweep capacity; failures do not abort the sweep.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub ldes_power_mw: f64,
    pub outcome: Result<BoundaryCurvePoint, ScenarioError>,
}

fn require_optimal(
    stage: &'static str,
    out: &crate::lp::SolveOutcome,
) -> Result<(), ScenarioError> {
    if out.is_optimal() {
        Ok(())
    } else {
        Err(ScenarioError::NotOptimal {
            stage,
            status: out.status,
            diagnostics: out.diagnostics.clone(),
        })
    }
}

/// Minimum system cost with no investment and no retirement.
pub fn run_baseline(
    instance: &SystemInstance,
    options: &ScenarioOptions,
) -> Result<BaselineResult, ScenarioError> {
    let model = build_baseline_model(instance, &baseline_policy(instance))?;
    let started = Instant::now();
    let out = solve(&model.lp, &options.solver)?;
    require_optimal("baseline", &out)?;
    Ok(BaselineResult {
        q_star: out.objective,
        breakdown: decompose_costs(&model, &out.primal),
        dispatch: extract_dispatch(instance, &model, &out.primal),
        simultaneous_use: model.simultaneous_use(instance, &out.primal, options.solver.feasibility_tol),
        primal: out.primal,
        model,
        solve_time_s: started.elapsed().as_secs_f64(),
    })
}

/// Boundary cost for a total long-duration build of `ldes_power_mw`, split
/// evenly across the long-duration candidates.
pub fn run_opportunity(
    instance: &SystemInstance,
    q_star: f64,
    ldes_power_mw: f64,
    options: &ScenarioOptions,
) -> Result<BoundaryCurvePoint, ScenarioError> {
    if !instance.storages.iter().any(|s| s.is_long() && s.is_candidate()) {
        return Err(ScenarioError::NoLdesCandidate);
    }
    let split = split_ldes_power(instance, ldes_power_mw);
    let mut policy = opportunity_policy(instance, &split);
    policy.overrun_penalty = options.overrun_penalty;
    policy.boundary_cost_floor = options.boundary_cost_floor;
    let model = build_opportunity_model(instance, &policy, q_star)?;
    let started = Instant::now();
    let out = solve(&model.lp, &options.solver)?;
    require_optimal("opportunity", &out)?;
    let x = &out.primal;
    let c_bc = x[model.catalog.boundary_cost.expect("opportunity model has c_bc").0];
    let q_over = x[model.catalog.budget_overrun.expect("opportunity model has q_over").0];
    let system_cost = model.system_cost(x);
    let tol = options.solver.feasibility_tol * q_star.abs().max(1.0);
    let soc_mwh = instance
        .storages
        .iter()
        .zip(&model.catalog.storages)
        .map(|(s, sv)| (s.id.clone(), sv.soc.iter().map(|v| x[v.0]).collect()))
        .collect();
    Ok(BoundaryCurvePoint {
        ldes_power_mw,
        q_star,
        boundary_cost_per_mw: c_bc,
        budget_overrun: q_over,
        viable: q_over <= tol && c_bc > 0.0,
        net_cost_reduction: q_star - system_cost + q_over,
        system_cost,
        plan: extract_plan(instance, &model, x),
        breakdown: decompose_costs(&model, x),
        soc_mwh,
        solve_time_s: started.elapsed().as_secs_f64(),
        primal: out.primal,
        model,
    })
}

pub fn validate_capacities(capacities: &[f64]) -> Result<(), ScenarioError> {
    if capacities.is_empty() {
        return Err(ScenarioError::InvalidCapacities("no capacities given".into()));
    }
    if let Some(c) = capacities.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
        return Err(ScenarioError::InvalidCapacities(format!(
            "capacities must be positive, got {c}"
        )));
    }
    if capacities.windows(2).any(|w| w[1] < w[0]) {
        return Err(ScenarioError::InvalidCapacities("capacities must be sorted ascending".into()));
    }
    Ok(())
}

/// Runs one opportunity solve per capacity against a shared `q_star`.
///
/// Points are solved in parallel on up to `options.workers` threads and
/// returned in input order.
pub fn sweep_boundary_curve(
    instance: &SystemInstance,
    q_star: f64,
    capacities: &[f64],
    options: &ScenarioOptions,
) -> Result<Vec<SweepPoint>, ScenarioError> {
    validate_capacities(capacities)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| ScenarioError::InvalidCapacities(format!("worker pool: {e}")))?;
    let points = pool.install(|| {
        capacities
            .par_iter()
            .map(|&mw| SweepPoint {
                ldes_power_mw: mw,
                outcome: run_opportunity(instance, q_star, mw, options),
            })
            .collect()
    });
    Ok(points)
}

/// Smallest swept capacity whose point is viable.
pub fn minimum_viable_capacity(points: &[SweepPoint]) -> Option<f64> {
    points
        .iter()
        .filter(|p| matches!(&p.outcome, Ok(b) if b.viable))
        .map(|p| p.ldes_power_mw)
        .reduce(f64::min)
}

/// Refines the minimum viable capacity by bisection between a non-viable
/// capacity `lo` and a viable capacity `hi`, until the bracket is narrower
/// than `tol_mw`. Assumes viability is monotone on the bracket.
pub fn bisect_minimum_viable(
    instance: &SystemInstance,
    q_star: f64,
    mut lo: f64,
    mut hi: f64,
    tol_mw: f64,
    options: &ScenarioOptions,
) -> Result<f64, ScenarioError> {
    if !(tol_mw > 0.0 && lo < hi) {
        return Err(ScenarioError::InvalidCapacities(format!(
            "bisection needs lo < hi and a positive tolerance, got [{lo}, {hi}] tol {tol_mw}"
        )));
    }
    while hi - lo > tol_mw {
        let mid = 0.5 * (lo + hi);
        if run_opportunity(instance, q_star, mid, options)?.viable {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
