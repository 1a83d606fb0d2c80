use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::check::check_solution;
use super::program::{LinearProgram, Relation, Sense};

pub const DEFAULT_BACKEND: &str = "microlp";

/// Backend selection and tolerances for a solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub backend: String,
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    pub time_limit_s: Option<f64>,
    pub threads: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            backend: DEFAULT_BACKEND.into(),
            feasibility_tol: 1e-8,
            optimality_tol: 1e-8,
            time_limit_s: None,
            threads: 1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    Limit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Objective including the constant term; NaN unless optimal.
    pub objective: f64,
    /// Empty unless a primal point is available.
    pub primal: Vec<f64>,
    pub duals: Option<Vec<f64>>,
    pub wall_time_s: f64,
    pub diagnostics: Option<String>,
}

impl SolveOutcome {
    fn without_point(status: SolveStatus, wall: Duration, diagnostics: Option<String>) -> Self {
        SolveOutcome {
            status,
            objective: f64::NAN,
            primal: Vec::new(),
            duals: None,
            wall_time_s: wall.as_secs_f64(),
            diagnostics,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("solver backend `{0}` is not available")]
    BackendUnavailable(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid linear program: {0}")]
    InvalidProgram(String),
}

/// A solver backend. Implementations return primal values and the objective;
/// duals are optional.
pub trait LpBackend: Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, lp: &LinearProgram, config: &SolverConfig) -> Result<SolveOutcome, SolveError>;
}

/// Sparse bounded primal/dual simplex from the `microlp` crate.
pub struct MicrolpBackend;

impl LpBackend for MicrolpBackend {
    fn name(&self) -> &'static str {
        "microlp"
    }

    fn solve(&self, lp: &LinearProgram, config: &SolverConfig) -> Result<SolveOutcome, SolveError> {
        let started = Instant::now();
        let direction = match lp.sense {
            Sense::Minimize => microlp::OptimizationDirection::Minimize,
            Sense::Maximize => microlp::OptimizationDirection::Maximize,
        };
        let mut problem = microlp::Problem::new(direction);
        let vars: Vec<_> = lp
            .variables()
            .iter()
            .zip(lp.costs())
            .map(|(v, &c)| problem.add_var(c, (v.lower, v.upper)))
            .collect();
        for c in lp.constraints() {
            let op = match c.relation {
                Relation::Le => microlp::ComparisonOp::Le,
                Relation::Eq => microlp::ComparisonOp::Eq,
                Relation::Ge => microlp::ComparisonOp::Ge,
            };
            let expr: Vec<_> = c.terms.iter().map(|(v, a)| (vars[v.0], *a)).collect();
            problem.add_constraint(expr.as_slice(), op, c.rhs);
        }
        let mut options = microlp::SolveOptions::default();
        options.time_limit = config.time_limit_s.map(Duration::from_secs_f64);

        let outcome = match problem.solve_with(options) {
            Ok(outcome) => outcome,
            Err(microlp::Error::Infeasible) => {
                return Ok(SolveOutcome::without_point(SolveStatus::Infeasible, started.elapsed(), None))
            }
            Err(microlp::Error::Unbounded) => {
                return Ok(SolveOutcome::without_point(SolveStatus::Unbounded, started.elapsed(), None))
            }
            Err(microlp::Error::InvalidOptions(msg)) => return Err(SolveError::InvalidConfig(msg)),
            Err(e) => {
                return Ok(SolveOutcome::without_point(
                    SolveStatus::Limit,
                    started.elapsed(),
                    Some(format!("numerical failure: {e}")),
                ))
            }
        };
        let Some(solution) = outcome.solution() else {
            return Ok(SolveOutcome::without_point(
                SolveStatus::Limit,
                started.elapsed(),
                Some("time limit reached before an optimal basis was found".into()),
            ));
        };
        let primal: Vec<f64> = vars.iter().map(|v| solution.var_value_raw(*v)).collect();
        let objective = lp.objective_value(&primal);
        let status = if solution.status() == microlp::SolutionStatus::Optimal {
            SolveStatus::Optimal
        } else {
            SolveStatus::Limit
        };
        Ok(SolveOutcome {
            status,
            objective,
            primal,
            duals: None,
            wall_time_s: started.elapsed().as_secs_f64(),
            diagnostics: None,
        })
    }
}

pub fn backend(name: &str) -> Result<&'static dyn LpBackend, SolveError> {
    match name {
        "microlp" => Ok(&MicrolpBackend),
        other => Err(SolveError::BackendUnavailable(other.to_owned())),
    }
}

pub fn available_backends() -> &'static [&'static str] {
    &["microlp"]
}

/// Solves `lp` with the configured backend.
///
/// An optimal answer from the backend is re-verified: if any bound or scaled
/// row violation exceeds `feasibility_tol`, the status is downgraded to
/// [`SolveStatus::Limit`] and the worst offender is named in the diagnostics.
pub fn solve(lp: &LinearProgram, config: &SolverConfig) -> Result<SolveOutcome, SolveError> {
    if !(config.feasibility_tol > 0.0 && config.optimality_tol > 0.0) {
        return Err(SolveError::InvalidConfig("tolerances must be positive".into()));
    }
    if let Some(t) = config.time_limit_s {
        if !(t.is_finite() && t > 0.0) {
            return Err(SolveError::InvalidConfig("time limit must be positive".into()));
        }
    }
    lp.validate().map_err(|e| SolveError::InvalidProgram(e.to_string()))?;
    let mut outcome = backend(&config.backend)?.solve(lp, config)?;
    if outcome.is_optimal() {
        let report = check_solution(lp, &outcome.primal, None, config.feasibility_tol);
        if report.max_bound_violation > config.feasibility_tol
            || report.max_scaled_violation > config.feasibility_tol
        {
            let worst = report
                .row_violations
                .iter()
                .max_by(|a, b| a.violation.total_cmp(&b.violation))
                .map(|r| format!("row `{}` violated by {:e}", r.row, r.violation))
                .or_else(|| {
                    report
                        .bound_violations
                        .first()
                        .map(|b| format!("bound on `{}` violated by {:e}", b.variable, b.violation))
                })
                .unwrap_or_default();
            outcome.status = SolveStatus::Limit;
            outcome.diagnostics = Some(format!("solution failed feasibility re-check: {worst}"));
        }
    }
    Ok(outcome)
}
