//! Run manifests: the resolved parameters, input digests, and output paths
//! that fully determine a run.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub parameters: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &'static str, parameters: impl Serialize) -> Result<Self> {
        Ok(Self {
            schema_version: 1,
            tool: "mdd",
            version: env!("CARGO_PKG_VERSION"),
            command,
            parameters: serde_json::to_value(parameters)?,
            inputs: Vec::new(),
            outputs: Vec::new(),
        })
    }

    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        Ok(())
    }

    pub fn add_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Serialize to pretty JSON and write; call after all outputs exist.
    pub fn write(&self, path: &PathBuf) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))
    }

    /// Write only when the caller asked for a sidecar.
    pub fn write_if_requested(&self, path: &Option<PathBuf>) -> Result<()> {
        match path {
            Some(path) => self.write(path),
            None => Ok(()),
        }
    }
}
