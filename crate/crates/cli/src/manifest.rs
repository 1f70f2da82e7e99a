use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

/// Everything needed to reproduce an output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    pub config: serde_json::Value,
    pub inputs: Vec<InputDigest>,
}

impl RunManifest {
    pub fn new(subcommand: &'static str, config: &impl Serialize, master_seed: Option<u64>) -> Self {
        RunManifest {
            subcommand,
            version: env!("CARGO_PKG_VERSION"),
            master_seed,
            config: serde_json::to_value(config).expect("argument structs serialize"),
            inputs: Vec::new(),
        }
    }

    /// Reads a file and records its digest.
    pub fn read_input(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        let hash = Sha256::digest(&bytes);
        let sha256 = hash.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push(InputDigest {
            path: path.to_path_buf(),
            sha256,
        });
        String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))
    }

    /// Writes the manifest to `path`, or as one JSON line to stderr.
    pub fn emit_sidecar(&self, path: Option<&Path>) -> Result<(), CliError> {
        let text = serde_json::to_string(self).expect("manifests serialize");
        match path {
            Some(p) => std::fs::write(p, text + "\n").map_err(|e| CliError::io(p, e)),
            None => {
                eprintln!("{text}");
                Ok(())
            }
        }
    }
}
