//! Per-run JSON record of parameters and emitted files.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    /// Path relative to the output directory.
    pub path: String,
    pub schema: String,
    pub rows: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    /// Seconds since the Unix epoch.
    pub started: f64,
    pub finished: f64,
    pub outputs: Vec<OutputFile>,
}

pub fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

impl RunManifest {
    pub fn new(command: &str, config: &RunConfig, started: f64) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: config.clone(),
            started,
            finished: started,
            outputs: Vec::new(),
        }
    }

    pub fn file_name(command: &str) -> String {
        format!("{command}_manifest.json")
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join(Self::file_name(&self.command));
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Recompute every output digest under `dir`; returns the mismatching paths.
    pub fn verify(&self, dir: &Path) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for out in &self.outputs {
            let path = dir.join(&out.path);
            let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
            if hex::encode(Sha256::digest(&bytes)) != out.sha256 {
                bad.push(out.path.clone());
            }
        }
        Ok(bad)
    }
}
