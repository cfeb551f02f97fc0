//! `suite.json`: everything needed to replay a generated suite.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{parse_seed, ConfigEcho};
use crate::error::{Error, Result};
use crate::search::GenerationStats;

pub const SCHEMA_VERSION: &str = "1.0";
const SCHEMA_MAJOR: u64 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteManifest {
    pub schema_version: String,
    pub tool: ToolInfo,
    pub config: ConfigEcho,
    pub hashes: Hashes,
    pub domain_size: usize,
    pub tests: Vec<TestRecord>,
    /// Inputs that occur more than once in the suite, with their count.
    pub duplicates: BTreeMap<String, usize>,
    pub history: Vec<GenerationStats>,
    pub summary: Summary,
    /// Kept apart so runs can be compared with this section removed.
    pub timing: Timing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// SHA-256 of the exact circuit and specification bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hashes {
    pub circuit: String,
    pub spec: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestRecord {
    pub index: usize,
    pub input: String,
    /// Seed of the sampling stream, as `0x` hex.
    pub seed: String,
    pub repetitions: usize,
    pub expected: BTreeMap<String, f64>,
    pub observed: BTreeMap<String, usize>,
    pub uof: bool,
    pub wodf: bool,
    pub p_value: Option<f64>,
    pub statistic: Option<f64>,
    pub failed: bool,
}

impl TestRecord {
    pub fn seed(&self) -> Result<u64> {
        parse_seed(&self.seed).map_err(Error::Usage)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub suite_size: usize,
    pub failing: usize,
    pub failing_percent: f64,
    pub evaluations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub simulation_seconds: f64,
    pub search_seconds: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl SuiteManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        let malformed = |message: String| Error::Manifest {
            path: path.to_path_buf(),
            message,
        };
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
        let version = value
            .get("schema_version")
            .and_then(|v| v.as_str())
            .ok_or_else(|| malformed("missing `schema_version`".into()))?;
        let major = version
            .split('.')
            .next()
            .and_then(|m| m.parse::<u64>().ok())
            .ok_or_else(|| malformed(format!("unreadable schema_version `{version}`")))?;
        if major > SCHEMA_MAJOR {
            return Err(malformed(format!(
                "schema version {version} is newer than this tool supports ({SCHEMA_VERSION})"
            )));
        }
        let manifest: SuiteManifest = serde_json::from_value(value).map_err(|e| malformed(e.to_string()))?;
        let failing = manifest.tests.iter().filter(|t| t.failed).count();
        if failing != manifest.summary.failing || manifest.tests.len() != manifest.summary.suite_size {
            return Err(malformed("summary disagrees with the test records".into()));
        }
        Ok(manifest)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, path)
    }

    /// The manifest with timing zeroed, for run-to-run comparison.
    pub fn without_timing(&self) -> SuiteManifest {
        SuiteManifest {
            timing: Timing {
                simulation_seconds: 0.0,
                search_seconds: 0.0,
            },
            ..self.clone()
        }
    }
}
