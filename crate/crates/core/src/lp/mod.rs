//! Solver-agnostic linear programs: construction, MPS interchange, solving
//! through a backend adapter, and residual checks.

mod check;
mod mps;
mod program;
mod solver;

pub use check::{check_solution, BoundViolation, ResidualReport, RowViolation};
pub use mps::{emit_mps, format_number, parse_mps, MpsError, NAME_LIMIT};
pub use program::{
    normalize_terms, Constraint, LinearProgram, LpError, Relation, RowId, Sense, VarId, Variable,
};
pub use solver::{
    available_backends, backend, solve, LpBackend, MicrolpBackend, SolveError, SolveOutcome,
    SolveStatus, SolverConfig, DEFAULT_BACKEND,
};
