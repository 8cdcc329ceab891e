//! Run manifests. The digest covers everything that determines the output
//! (command, options, seed, input contents, tool version) and nothing that
//! doesn't (paths, wall time), so piped and file-based runs cite the same one.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const MANIFEST_SCHEMA: &str = "satsched/manifest/v1";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub command: String,
    pub inputs: Vec<InputRecord>,
    pub seed: Option<u64>,
    pub config: Value,
    pub config_digest: String,
    pub tool_version: &'static str,
    /// Seconds since the Unix epoch when the run started.
    pub wall_time: f64,
    pub digest: String,
}

impl RunManifest {
    pub fn new(command: &str, inputs: Vec<InputRecord>, seed: Option<u64>, config: Value) -> Self {
        let config_digest = sha256_hex(config.to_string().as_bytes());
        let tool_version = env!("CARGO_PKG_VERSION");
        let hashes: Vec<&str> = inputs.iter().map(|i| i.sha256.as_str()).collect();
        let digest = sha256_hex(
            json!({
                "command": command,
                "inputs": hashes,
                "seed": seed,
                "config_digest": config_digest,
                "tool_version": tool_version,
            })
            .to_string()
            .as_bytes(),
        );
        let wall_time = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs_f64())
            .unwrap_or(0.0);
        Self {
            schema: MANIFEST_SCHEMA,
            command: command.to_string(),
            inputs,
            seed,
            config,
            config_digest,
            tool_version,
            wall_time,
            digest,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}
