use serde::Serialize;
use thiserror::Error;

use crate::config::ConfigError;
use crate::lp::{MpsError, SolveError};
use crate::model::ModelError;
use crate::pipeline::PipelineError;
use crate::scenario::ScenarioError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_PARTIAL: i32 = 4;

/// Any failure of a command, classified for the process exit status.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Mps(#[from] MpsError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    CheckFailed(String),
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    exit_code: i32,
    message: String,
}

impl Error {
    pub fn io(path: impl AsRef<std::path::Path>, e: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: e.to_string(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::Pipeline(_) => "input",
            Error::Model(_) => "model",
            Error::Scenario(ScenarioError::Model(_)) => "model",
            Error::Scenario(ScenarioError::InvalidCapacities(_)) => "usage",
            Error::Scenario(ScenarioError::NoLdesCandidate) => "model",
            Error::Scenario(_) | Error::Solve(_) => "solver",
            Error::Mps(_) => "mps",
            Error::Io { .. } => "io",
            Error::Usage(_) => "usage",
            Error::CheckFailed(_) => "check",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "solver" | "check" => EXIT_SOLVER,
            _ => EXIT_INPUT,
        }
    }

    /// One-line JSON description for stderr.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorRecord {
            error: self.kind(),
            exit_code: self.exit_code(),
            message: self.to_string(),
        })
        .expect("error records serialize")
    }
}
