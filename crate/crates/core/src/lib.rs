//! Boundary cost of long-duration energy storage (LDES).
//!
//! A capacity-expansion LP is solved once to get the minimum system cost
//! `q*`. A second LP then fixes a given LDES build, retires gas, and finds
//! the largest per-MW storage cost at which the system is still no more
//! expensive than `q*`. Sweeping the LDES capacity traces the boundary-cost
//! curve.
//!
//! Modules, bottom up:
//!
//! * [`domain`]: generators, storage, instances, policy overrides.
//! * [`lp`]: solver-agnostic LPs, fixed MPS, the solver adapter, residual checks.
//! * [`model`]: the capacity-expansion constraint blocks and both model variants.
//! * [`scenario`]: baseline, opportunity and sweep runs.
//! * [`pipeline`]: CSV ingestion, clustering and instance assembly.
//! * [`config`] and [`report`]: TOML configuration, commands and result files.

pub mod config;
pub mod domain;
pub mod error;
pub mod lp;
pub mod model;
pub mod pipeline;
pub mod report;
pub mod scenario;
pub mod toy;

pub use error::Error;
