//! Run manifests embedded in every output file: tool version, full
//! parameter set, seed, timestamps, and digests of any input files.
//! Re-running with the same manifest reproduces the payload byte for
//! byte; timestamps live only in the manifest, never in the payload.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::Error;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub subcommand: String,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub input_digests: Vec<(String, String)>,
}

impl RunManifest {
    pub fn start(subcommand: &str, parameters: serde_json::Value, seed: Option<u64>) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            parameters,
            seed,
            started_unix_ms: now_ms(),
            finished_unix_ms: 0,
            input_digests: Vec::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<(), Error> {
        let data = std::fs::read(path)?;
        let digest = hex_digest(&data);
        self.input_digests
            .push((path.display().to_string(), digest));
        Ok(())
    }

    pub fn finish(&mut self) {
        self.finished_unix_ms = now_ms();
    }
}

fn now_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

pub fn hex_digest(data: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(data);
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// The standard output envelope: manifest plus deterministic payload.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub manifest: RunManifest,
    pub payload: T,
}
