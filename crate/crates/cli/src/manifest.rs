//! Run manifests: config echo, version, stage timings, output hashes.
//! Written atomically (temp file + rename) at the end of a successful run.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use oscillab_core::{Error, Result};

use crate::config::RunConfig;

#[derive(Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub config: RunConfig,
    pub timings_ms: BTreeMap<String, u128>,
    pub outputs: Vec<OutputEntry>,
}

#[derive(Serialize, Deserialize)]
pub struct OutputEntry {
    pub path: String,
    pub bytes: u64,
    /// FNV-1a 64 of the file contents, hex.
    pub fnv64: String,
}

/// FNV-1a 64-bit.
pub fn fnv64(data: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in data {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

pub fn output_entry(path: &str) -> Result<OutputEntry> {
    let data = std::fs::read(path)?;
    Ok(OutputEntry {
        path: path.to_string(),
        bytes: data.len() as u64,
        fnv64: format!("{:016x}", fnv64(&data)),
    })
}

pub fn write_manifest(
    dir: &str,
    config: &RunConfig,
    timings_ms: BTreeMap<String, u128>,
    outputs: Vec<OutputEntry>,
) -> Result<String> {
    let manifest = RunManifest {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        timings_ms,
        outputs,
    };
    let path = Path::new(dir).join("manifest.json");
    let tmp = Path::new(dir).join(".manifest.json.tmp");
    let body = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::BadInput(format!("manifest serialization: {e}")))?;
    std::fs::write(&tmp, body)?;
    std::fs::rename(&tmp, &path)?;
    Ok(path.to_string_lossy().into_owned())
}

pub fn read_manifest(path: &str) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::BadInput(format!("cannot read manifest {path}: {e}")))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::BadInput(format!("bad manifest {path}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv64(b"foobar"), 0x85944171f73967e8);
    }
}
