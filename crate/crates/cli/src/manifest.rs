//! JSON sidecar recording exactly how a dataset was produced: the command,
//! every parameter including defaults actually used (SI-normalized), the
//! seed where one applies, and every file the run wrote.

use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub artifact_version: String,
    pub output_paths: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seed: None,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            output_paths: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn output(&mut self, path: &Path) -> &mut Self {
        self.output_paths.push(path.display().to_string());
        self
    }

    /// Sidecar path `<out>.manifest.json`.
    pub fn sidecar_path(out: &Path) -> PathBuf {
        let mut name = out.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        out.with_file_name(name)
    }

    /// Write the manifest next to `out`, listing itself as an output too.
    pub fn write_sidecar(mut self, out: &Path) -> std::io::Result<PathBuf> {
        let path = Self::sidecar_path(out);
        self.output_paths.push(path.display().to_string());
        let json = serde_json::to_string_pretty(&self).expect("manifest serializes");
        std::fs::write(&path, json + "\n")?;
        Ok(path)
    }
}
