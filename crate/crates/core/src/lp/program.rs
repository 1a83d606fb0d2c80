use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("constraint `{constraint}` references undeclared variable index {index}")]
    UnknownVariable { constraint: String, index: usize },
    #[error("non-finite value in {context}")]
    NotFinite { context: String },
    #[error("invalid bounds [{lower}, {upper}] on variable `{name}`")]
    InvalidBound { name: String, lower: f64, upper: f64 },
    #[error("empty name for {kind}")]
    EmptyName { kind: &'static str },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    /// Human-readable description; not part of the structural identity.
    pub label: String,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub label: String,
    /// Sorted by variable index, no duplicates, no zeros.
    pub terms: Vec<(VarId, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(v, a)| a * x[v.0]).sum()
    }
}

/// A sparse linear program with named variables and constraints.
///
/// Objective coefficients are stored per variable; the objective constant is
/// carried separately and included by [`LinearProgram::objective_value`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearProgram {
    pub name: String,
    pub objective_name: String,
    pub sense: Sense,
    pub objective_constant: f64,
    variables: Vec<Variable>,
    costs: Vec<f64>,
    constraints: Vec<Constraint>,
    #[serde(skip)]
    var_names: HashSet<String>,
    #[serde(skip)]
    row_names: HashSet<String>,
}

/// Sorts terms by variable, merges duplicates and drops exact zeros.
pub fn normalize_terms(terms: impl IntoIterator<Item = (VarId, f64)>) -> Vec<(VarId, f64)> {
    let mut terms: Vec<_> = terms.into_iter().collect();
    terms.sort_by_key(|(v, _)| *v);
    let mut out: Vec<(VarId, f64)> = Vec::with_capacity(terms.len());
    for (v, a) in terms {
        match out.last_mut() {
            Some((last, acc)) if *last == v => *acc += a,
            _ => out.push((v, a)),
        }
    }
    out.retain(|(_, a)| *a != 0.0);
    out
}

impl LinearProgram {
    pub fn new(name: impl Into<String>, sense: Sense) -> Self {
        LinearProgram {
            name: name.into(),
            objective_name: "OBJ".into(),
            sense,
            objective_constant: 0.0,
            variables: Vec::new(),
            costs: Vec::new(),
            constraints: Vec::new(),
            var_names: HashSet::new(),
            row_names: HashSet::new(),
        }
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, v: VarId) -> &Variable {
        &self.variables[v.0]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, r: RowId) -> &Constraint {
        &self.constraints[r.0]
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn cost(&self, v: VarId) -> f64 {
        self.costs[v.0]
    }

    pub fn find_variable(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v.name == name).map(VarId)
    }

    pub fn find_constraint(&self, name: &str) -> Option<RowId> {
        self.constraints.iter().position(|c| c.name == name).map(RowId)
    }

    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        lower: f64,
        upper: f64,
    ) -> Result<VarId, LpError> {
        let name = name.into();
        self.add_labeled_variable(name.clone(), name, lower, upper)
    }

    pub fn add_labeled_variable(
        &mut self,
        name: impl Into<String>,
        label: impl Into<String>,
        lower: f64,
        upper: f64,
    ) -> Result<VarId, LpError> {
        let name = name.into();
        if name.is_empty() {
            return Err(LpError::EmptyName { kind: "variable" });
        }
        if lower.is_nan() || upper.is_nan() || lower == f64::INFINITY || upper == f64::NEG_INFINITY {
            return Err(LpError::InvalidBound { name, lower, upper });
        }
        if !self.var_names.insert(name.clone()) {
            return Err(LpError::DuplicateName { kind: "variable", name });
        }
        self.variables.push(Variable {
            name,
            label: label.into(),
            lower,
            upper,
        });
        self.costs.push(0.0);
        Ok(VarId(self.variables.len() - 1))
    }

    pub fn set_bounds(&mut self, v: VarId, lower: f64, upper: f64) -> Result<(), LpError> {
        let var = &mut self.variables[v.0];
        if lower.is_nan() || upper.is_nan() || lower == f64::INFINITY || upper == f64::NEG_INFINITY {
            return Err(LpError::InvalidBound {
                name: var.name.clone(),
                lower,
                upper,
            });
        }
        var.lower = lower;
        var.upper = upper;
        Ok(())
    }

    pub fn set_cost(&mut self, v: VarId, c: f64) -> Result<(), LpError> {
        if !c.is_finite() {
            return Err(LpError::NotFinite {
                context: format!("objective coefficient of `{}`", self.variables[v.0].name),
            });
        }
        self.costs[v.0] = c;
        Ok(())
    }

    pub fn add_cost(&mut self, v: VarId, c: f64) -> Result<(), LpError> {
        let c = self.costs[v.0] + c;
        self.set_cost(v, c)
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: impl IntoIterator<Item = (VarId, f64)>,
        relation: Relation,
        rhs: f64,
    ) -> Result<RowId, LpError> {
        let name = name.into();
        self.add_labeled_constraint(name.clone(), name, terms, relation, rhs)
    }

    pub fn add_labeled_constraint(
        &mut self,
        name: impl Into<String>,
        label: impl Into<String>,
        terms: impl IntoIterator<Item = (VarId, f64)>,
        relation: Relation,
        rhs: f64,
    ) -> Result<RowId, LpError> {
        let name = name.into();
        if name.is_empty() {
            return Err(LpError::EmptyName { kind: "constraint" });
        }
        let terms = normalize_terms(terms);
        for (v, a) in &terms {
            if v.0 >= self.variables.len() {
                return Err(LpError::UnknownVariable {
                    constraint: name,
                    index: v.0,
                });
            }
            if !a.is_finite() {
                return Err(LpError::NotFinite {
                    context: format!("coefficient in constraint `{name}`"),
                });
            }
        }
        if !rhs.is_finite() {
            return Err(LpError::NotFinite {
                context: format!("right-hand side of `{name}`"),
            });
        }
        if name == self.objective_name || !self.row_names.insert(name.clone()) {
            return Err(LpError::DuplicateName { kind: "constraint", name });
        }
        self.constraints.push(Constraint {
            name,
            label: label.into(),
            terms,
            relation,
            rhs,
        });
        Ok(RowId(self.constraints.len() - 1))
    }

    /// Objective including the constant term.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective_constant + self.costs.iter().zip(x).map(|(c, v)| c * v).sum::<f64>()
    }

    /// Equality on everything except labels.
    pub fn structurally_eq(&self, other: &LinearProgram) -> bool {
        self.name == other.name
            && self.objective_name == other.objective_name
            && self.sense == other.sense
            && self.objective_constant == other.objective_constant
            && self.costs == other.costs
            && self.variables.len() == other.variables.len()
            && self
                .variables
                .iter()
                .zip(&other.variables)
                .all(|(a, b)| a.name == b.name && a.lower == b.lower && a.upper == b.upper)
            && self.constraints.len() == other.constraints.len()
            && self.constraints.iter().zip(&other.constraints).all(|(a, b)| {
                a.name == b.name && a.relation == b.relation && a.rhs == b.rhs && a.terms == b.terms
            })
    }

    /// Re-checks every invariant; useful after deserialization.
    pub fn validate(&self) -> Result<(), LpError> {
        let mut names = HashSet::new();
        for v in &self.variables {
            if !names.insert(v.name.as_str()) {
                return Err(LpError::DuplicateName { kind: "variable", name: v.name.clone() });
            }
            if v.lower.is_nan() || v.upper.is_nan() {
                return Err(LpError::InvalidBound {
                    name: v.name.clone(),
                    lower: v.lower,
                    upper: v.upper,
                });
            }
        }
        if let Some(i) = self.costs.iter().position(|c| !c.is_finite()) {
            return Err(LpError::NotFinite {
                context: format!("objective coefficient of `{}`", self.variables[i].name),
            });
        }
        let mut rows = HashSet::new();
        for c in &self.constraints {
            if !rows.insert(c.name.as_str()) {
                return Err(LpError::DuplicateName { kind: "constraint", name: c.name.clone() });
            }
            for (v, a) in &c.terms {
                if v.0 >= self.variables.len() {
                    return Err(LpError::UnknownVariable {
                        constraint: c.name.clone(),
                        index: v.0,
                    });
                }
                if a.is_nan() {
                    return Err(LpError::NotFinite {
                        context: format!("coefficient in constraint `{}`", c.name),
                    });
                }
            }
        }
        Ok(())
    }

    /// Rebuilds the name indexes, which are not serialized.
    pub fn reindex(&mut self) {
        self.var_names = self.variables.iter().map(|v| v.name.clone()).collect();
        self.row_names = self.constraints.iter().map(|c| c.name.clone()).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        let mut lp = LinearProgram::new("t", Sense::Minimize);
        lp.add_variable("x", 0.0, 1.0).unwrap();
        assert!(matches!(
            lp.add_variable("x", 0.0, 1.0),
            Err(LpError::DuplicateName { .. })
        ));
        let x = VarId(0);
        lp.add_constraint("c", [(x, 1.0)], Relation::Le, 1.0).unwrap();
        assert!(lp.add_constraint("c", [(x, 1.0)], Relation::Le, 1.0).is_err());
        assert!(lp.add_constraint("OBJ", [(x, 1.0)], Relation::Le, 1.0).is_err());
    }

    #[test]
    fn terms_are_normalized() {
        let t = normalize_terms([(VarId(2), 1.0), (VarId(0), 2.0), (VarId(2), -1.0), (VarId(0), 1.0)]);
        assert_eq!(t, vec![(VarId(0), 3.0)]);
    }

    #[test]
    fn nan_and_unknown_rejected() {
        let mut lp = LinearProgram::new("t", Sense::Minimize);
        let x = lp.add_variable("x", 0.0, f64::INFINITY).unwrap();
        assert!(lp.add_constraint("a", [(x, f64::NAN)], Relation::Eq, 0.0).is_err());
        assert!(lp.add_constraint("b", [(VarId(7), 1.0)], Relation::Eq, 0.0).is_err());
        assert!(lp.set_cost(x, f64::NAN).is_err());
        assert!(lp.add_variable("y", f64::INFINITY, f64::INFINITY).is_err());
    }
}
