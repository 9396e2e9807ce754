//! Provenance header embedded in every output file: enough to reproduce the
//! run (config checksum + seed + tool version) plus a timestamp, which is the
//! only field allowed to differ between reproductions.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Hex SHA-256 of the config file bytes as read.
    pub config_checksum: String,
    /// Effective base seed (after any `--seed` override).
    pub base_seed: u64,
    pub tool_version: String,
    /// ISO-8601 UTC creation time.
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(config_bytes: &[u8], base_seed: u64) -> Self {
        Self {
            config_checksum: sha256_hex(config_bytes),
            base_seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Micros, true),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_known_vector() {
        // sha256("abc")
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn manifest_embeds_version_and_seed() {
        let m = RunManifest::new(b"{}", 7);
        assert_eq!(m.base_seed, 7);
        assert_eq!(m.tool_version, env!("CARGO_PKG_VERSION"));
        assert!(m.timestamp.ends_with('Z'));
    }
}
