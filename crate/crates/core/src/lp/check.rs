use serde::{Deserialize, Serialize};

use super::program::{LinearProgram, Relation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowViolation {
    pub row: String,
    pub relation: Relation,
    /// Activity minus right-hand side.
    pub residual: f64,
    /// Amount by which the relation is violated (always >= 0).
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundViolation {
    pub variable: String,
    pub value: f64,
    pub violation: f64,
}

/// Feasibility and objective residuals of a primal point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub tolerance: f64,
    pub max_bound_violation: f64,
    pub max_violation_le: f64,
    pub max_violation_ge: f64,
    pub max_violation_eq: f64,
    /// Largest row violation divided by `1 + |rhs| + sum |a_j x_j|`.
    pub max_scaled_violation: f64,
    pub objective_recomputed: f64,
    /// Recomputed objective minus the reported one (0 when none was reported).
    pub objective_delta: f64,
    /// Bounds violated by more than `tolerance`.
    pub bound_violations: Vec<BoundViolation>,
    /// Rows violated by more than `tolerance`.
    pub row_violations: Vec<RowViolation>,
}

impl ResidualReport {
    pub fn max_constraint_violation(&self) -> f64 {
        self.max_violation_le.max(self.max_violation_ge).max(self.max_violation_eq)
    }

    pub fn passes(&self) -> bool {
        self.max_bound_violation <= self.tolerance
            && self.max_constraint_violation() <= self.tolerance
            && self.objective_delta.abs() <= self.tolerance * self.objective_recomputed.abs().max(1.0)
    }

    pub fn row(&self, name: &str) -> Option<&RowViolation> {
        self.row_violations.iter().find(|r| r.row == name)
    }
}

/// Evaluates `primal` against every bound and row of `lp`.
///
/// `reported_objective` is compared against the recomputed objective when given.
pub fn check_solution(
    lp: &LinearProgram,
    primal: &[f64],
    reported_objective: Option<f64>,
    tol: f64,
) -> ResidualReport {
    assert_eq!(primal.len(), lp.num_variables(), "primal length mismatch");
    let mut report = ResidualReport {
        tolerance: tol,
        max_bound_violation: 0.0,
        max_violation_le: 0.0,
        max_violation_ge: 0.0,
        max_violation_eq: 0.0,
        max_scaled_violation: 0.0,
        objective_recomputed: lp.objective_value(primal),
        objective_delta: 0.0,
        bound_violations: Vec::new(),
        row_violations: Vec::new(),
    };
    if let Some(obj) = reported_objective {
        report.objective_delta = report.objective_recomputed - obj;
    }
    for (var, &x) in lp.variables().iter().zip(primal) {
        let violation = if x.is_nan() {
            f64::INFINITY
        } else {
            (var.lower - x).max(x - var.upper).max(0.0)
        };
        report.max_bound_violation = report.max_bound_violation.max(violation);
        if violation > tol {
            report.bound_violations.push(BoundViolation {
                variable: var.name.clone(),
                value: x,
                violation,
            });
        }
    }
    for c in lp.constraints() {
        let mut activity = 0.0;
        let mut magnitude = 0.0;
        for (v, a) in &c.terms {
            let term = a * primal[v.0];
            activity += term;
            magnitude += term.abs();
        }
        let residual = activity - c.rhs;
        let violation = match c.relation {
            Relation::Le => residual.max(0.0),
            Relation::Ge => (-residual).max(0.0),
            Relation::Eq => residual.abs(),
        };
        let violation = if violation.is_nan() { f64::INFINITY } else { violation };
        let slot = match c.relation {
            Relation::Le => &mut report.max_violation_le,
            Relation::Ge => &mut report.max_violation_ge,
            Relation::Eq => &mut report.max_violation_eq,
        };
        *slot = slot.max(violation);
        let scaled = violation / (1.0 + c.rhs.abs() + magnitude);
        report.max_scaled_violation = report.max_scaled_violation.max(scaled);
        if violation > tol {
            report.row_violations.push(RowViolation {
                row: c.name.clone(),
                relation: c.relation,
                residual,
                violation,
            });
        }
    }
    report
}
