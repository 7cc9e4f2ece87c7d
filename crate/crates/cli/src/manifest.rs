//! `manifest.json`: what was run, with which parameters, on which files.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub version: String,
    pub argv: Vec<String>,
    pub seed: Option<u64>,
    pub parameters: Map<String, Value>,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            argv: std::env::args().collect(),
            seed: None,
            parameters: Map::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn input(&mut self, path: &Path) -> &mut Self {
        self.inputs.push(path.to_path_buf());
        self
    }

    pub fn output(&mut self, path: &Path) -> &mut Self {
        self.outputs.push(path.to_path_buf());
        self
    }

    /// Writes `manifest.json` into `dir`.
    pub fn write(&mut self, dir: &Path) -> Result<()> {
        let path = dir.join("manifest.json");
        self.outputs.push(path.clone());
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }
}
