use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use sphmax::experiments::ExperimentConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
}

/// Everything needed to replay a run. Feeding the manifest back to
/// `experiment` reproduces every listed output byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub started_unix: u64,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        config: &ExperimentConfig,
        wall_clock_seconds: f64,
        outputs: Vec<OutputDigest>,
    ) -> Self {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunManifest {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            config: config.clone(),
            started_unix: now.saturating_sub(wall_clock_seconds as u64),
            wall_clock_seconds,
            outputs,
        }
    }

    /// The embedded config when `doc` is a manifest.
    pub fn config_of(doc: &Value) -> Option<&Value> {
        doc.get("tool_version")?;
        doc.get("config")
    }
}

pub fn digest_file(path: &Path) -> io::Result<OutputDigest> {
    let bytes = fs::read(path)?;
    let hash = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(64);
    for b in hash.iter() {
        write!(hex, "{b:02x}").expect("writing to a String");
    }
    Ok(OutputDigest {
        file: path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        sha256: hex,
    })
}
