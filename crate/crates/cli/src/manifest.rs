//! Run manifests: a JSON snapshot of the effective configuration, input
//! digests, and per-stage counts. Manifests contain no timestamps or
//! absolute paths, so identical configs on identical inputs produce
//! byte-identical files.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

#[derive(Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub role: String,
    /// File name only; manifests never embed directories.
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: ToolInfo,
    pub command: String,
    pub config: RunConfig,
    pub inputs: Vec<InputDigest>,
    pub stages: BTreeMap<String, serde_json::Value>,
}

impl RunManifest {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        RunManifest {
            tool: ToolInfo {
                name: "citemap",
                version: env!("CARGO_PKG_VERSION"),
            },
            command: command.to_string(),
            config: config.clone(),
            inputs: Vec::new(),
            stages: BTreeMap::new(),
        }
    }

    pub fn add_input(&mut self, role: &str, path: &Path) -> anyhow::Result<()> {
        let bytes =
            std::fs::read(path).with_context(|| format!("digesting {}", path.display()))?;
        let digest = Sha256::digest(&bytes);
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        self.inputs.push(InputDigest {
            role: role.to_string(),
            file: path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default(),
            sha256: hex,
        });
        Ok(())
    }

    pub fn stage(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.stages.insert(key.to_string(), value.into());
    }

    pub fn write(&self, dir: &Path) -> anyhow::Result<std::path::PathBuf> {
        let path = dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}
