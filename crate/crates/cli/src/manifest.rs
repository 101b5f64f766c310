use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Provenance of one run. Holds no timestamps so identical runs write
/// identical bytes.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub input_digest: String,
    pub seed: u64,
    pub version: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<String>,
}

/// SHA-256 over length-prefixed fields.
#[derive(Default)]
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn field(mut self, name: &str, value: impl AsRef<[u8]>) -> Self {
        for part in [name.as_bytes(), value.as_ref()] {
            self.0.update((part.len() as u64).to_le_bytes());
            self.0.update(part);
        }
        self
    }

    pub fn hex(self) -> String {
        hex::encode(self.0.finalize())
    }
}

impl RunManifest {
    pub fn new(command: &str, digest: InputDigest, seed: u64) -> Self {
        Self {
            command: command.into(),
            input_digest: digest.hex(),
            seed,
            version: env!("CARGO_PKG_VERSION").into(),
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(self)? + "\n";
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }
}
