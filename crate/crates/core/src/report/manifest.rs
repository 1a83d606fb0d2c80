use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::lp::SolverConfig;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> io::Result<String> {
    Ok(sha256_hex(&fs::read(path)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTime {
    pub stage: String,
    pub wall_time_s: f64,
}

/// Provenance of one command run. The only file that carries timestamps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub engine_version: String,
    pub config_path: String,
    pub config_sha256: String,
    pub inputs: Vec<InputDigest>,
    pub solver: SolverConfig,
    pub started_at: String,
    pub finished_at: String,
    pub stages: Vec<StageTime>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    /// Recomputes every input digest and reports the paths that no longer match.
    pub fn stale_inputs(&self) -> Vec<String> {
        self.inputs
            .iter()
            .filter(|i| file_digest(Path::new(&i.path)).ok().as_deref() != Some(i.sha256.as_str()))
            .map(|i| i.path.clone())
            .collect()
    }
}
