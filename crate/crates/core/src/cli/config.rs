//! Run configuration: a flat TOML file whose keys can all be overridden by
//! command-line flags.
//!
//! ```toml
//! circuit = "fault_uof.qasm"      # relative to the config file
//! spec = "spec.json"
//! input_qubits = [0, 1]
//! output_qubits = [2]
//! suite_percentage = 1.0          # or: suite_size = 4
//! population_size = 10
//! max_generations = 50
//! crossover_rate = 0.9
//! crossover_distribution_index = 20.0
//! mutation_rate = 0.25            # default 1/M
//! mutation_distribution_index = 20.0
//! alpha = 0.01
//! master_seed = 7                 # integer, or a "0x..." string
//! elitism = 1
//! output_dir = "out"
//! strict_domain = true
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circuit::Roles;
use crate::error::{Error, Result};
use crate::search::{SearchConfig, SuiteSize};

/// A seed written either as a non-negative integer or as a string in
/// decimal or `0x` hexadecimal (TOML integers stop at 2^63 - 1).
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum SeedValue {
    Int(u64),
    Text(String),
}

impl SeedValue {
    pub fn resolve(&self) -> Result<u64> {
        match self {
            SeedValue::Int(v) => Ok(*v),
            SeedValue::Text(s) => parse_seed(s).map_err(Error::Usage),
        }
    }
}

pub fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse::<u64>(),
    };
    parsed.map_err(|_| format!("invalid seed `{s}`: expected a 64-bit integer in decimal or 0x hex"))
}

/// Every key is optional here; `resolve` enforces the required ones after
/// file and flags are merged.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub circuit: Option<PathBuf>,
    pub spec: Option<PathBuf>,
    pub input_qubits: Option<Vec<usize>>,
    pub output_qubits: Option<Vec<usize>>,
    pub suite_size: Option<usize>,
    pub suite_percentage: Option<f64>,
    pub population_size: Option<usize>,
    pub max_generations: Option<usize>,
    pub crossover_rate: Option<f64>,
    pub crossover_distribution_index: Option<f64>,
    pub mutation_rate: Option<f64>,
    pub mutation_distribution_index: Option<f64>,
    pub alpha: Option<f64>,
    pub master_seed: Option<SeedValue>,
    pub elitism: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub strict_domain: Option<bool>,
}

impl ConfigFile {
    /// Reads a config file, resolving its relative paths against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::parse(&text).map_err(|message| Error::ConfigFile {
            path: path.to_path_buf(),
            message,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.circuit, &mut cfg.spec, &mut cfg.output_dir]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string().trim_end().to_string())
    }

    /// Values set in `flags` win over values in `self`.
    pub fn merge(self, flags: ConfigFile) -> ConfigFile {
        // Either suite-size key in the flags replaces both from the file.
        let suite_from_flags = flags.suite_size.is_some() || flags.suite_percentage.is_some();
        let (suite_size, suite_percentage) = if suite_from_flags {
            (flags.suite_size, flags.suite_percentage)
        } else {
            (self.suite_size, self.suite_percentage)
        };
        ConfigFile {
            circuit: flags.circuit.or(self.circuit),
            spec: flags.spec.or(self.spec),
            input_qubits: flags.input_qubits.or(self.input_qubits),
            output_qubits: flags.output_qubits.or(self.output_qubits),
            suite_size,
            suite_percentage,
            population_size: flags.population_size.or(self.population_size),
            max_generations: flags.max_generations.or(self.max_generations),
            crossover_rate: flags.crossover_rate.or(self.crossover_rate),
            crossover_distribution_index: flags.crossover_distribution_index.or(self.crossover_distribution_index),
            mutation_rate: flags.mutation_rate.or(self.mutation_rate),
            mutation_distribution_index: flags.mutation_distribution_index.or(self.mutation_distribution_index),
            alpha: flags.alpha.or(self.alpha),
            master_seed: flags.master_seed.or(self.master_seed),
            elitism: flags.elitism.or(self.elitism),
            output_dir: flags.output_dir.or(self.output_dir),
            strict_domain: flags.strict_domain.or(self.strict_domain),
        }
    }

    pub fn resolve(self) -> Result<RunConfig> {
        let missing = |key: &str| {
            Error::Usage(format!(
                "missing key `{key}` (set it in the config file or pass --{})",
                key.replace('_', "-")
            ))
        };
        let suite_size = match (self.suite_size, self.suite_percentage) {
            (Some(_), Some(_)) => {
                return Err(Error::Usage(
                    "keys `suite_size` and `suite_percentage` are mutually exclusive".into(),
                ))
            }
            (Some(m), None) => SuiteSize::Absolute(m),
            (None, Some(b)) => SuiteSize::Percentage(b),
            (None, None) => SearchConfig::default().suite_size,
        };
        let d = SearchConfig::default();
        let search = SearchConfig {
            suite_size,
            population_size: self.population_size.unwrap_or(d.population_size),
            max_generations: self.max_generations.unwrap_or(d.max_generations),
            crossover_rate: self.crossover_rate.unwrap_or(d.crossover_rate),
            crossover_distribution_index: self
                .crossover_distribution_index
                .unwrap_or(d.crossover_distribution_index),
            mutation_rate: self.mutation_rate.or(d.mutation_rate),
            mutation_distribution_index: self
                .mutation_distribution_index
                .unwrap_or(d.mutation_distribution_index),
            alpha: self.alpha.unwrap_or(d.alpha),
            master_seed: match &self.master_seed {
                Some(s) => s.resolve()?,
                None => d.master_seed,
            },
            elitism: self.elitism.unwrap_or(d.elitism),
        };
        search.validate()?;
        Ok(RunConfig {
            circuit_path: self.circuit.ok_or_else(|| missing("circuit"))?,
            spec_path: self.spec.ok_or_else(|| missing("spec"))?,
            roles: Roles::new(
                self.input_qubits.ok_or_else(|| missing("input_qubits"))?,
                self.output_qubits.ok_or_else(|| missing("output_qubits"))?,
            ),
            search,
            output_dir: self.output_dir.unwrap_or_else(|| PathBuf::from(".")),
            strict_domain: self.strict_domain.unwrap_or(true),
        })
    }
}

/// A fully resolved configuration for `generate`.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub circuit_path: PathBuf,
    pub spec_path: PathBuf,
    pub roles: Roles,
    pub search: SearchConfig,
    pub output_dir: PathBuf,
    pub strict_domain: bool,
}

impl RunConfig {
    pub fn new(circuit_path: impl Into<PathBuf>, spec_path: impl Into<PathBuf>, roles: Roles) -> Self {
        RunConfig {
            circuit_path: circuit_path.into(),
            spec_path: spec_path.into(),
            roles,
            search: SearchConfig::default(),
            output_dir: PathBuf::from("."),
            strict_domain: true,
        }
    }

    /// The echo stored in a manifest.
    pub fn echo(&self) -> ConfigEcho {
        let s = &self.search;
        let (suite_size, suite_percentage) = match s.suite_size {
            SuiteSize::Absolute(m) => (Some(m), None),
            SuiteSize::Percentage(b) => (None, Some(b)),
        };
        ConfigEcho {
            circuit: self.circuit_path.display().to_string(),
            spec: self.spec_path.display().to_string(),
            input_qubits: self.roles.input.clone(),
            output_qubits: self.roles.output.clone(),
            suite_size,
            suite_percentage,
            population_size: s.population_size,
            max_generations: s.max_generations,
            crossover_rate: s.crossover_rate,
            crossover_distribution_index: s.crossover_distribution_index,
            mutation_rate: s.mutation_rate,
            mutation_distribution_index: s.mutation_distribution_index,
            alpha: s.alpha,
            master_seed: format_seed(s.master_seed),
            elitism: s.elitism,
            output_dir: self.output_dir.display().to_string(),
            strict_domain: self.strict_domain,
        }
    }
}

pub fn format_seed(seed: u64) -> String {
    format!("0x{seed:016x}")
}

/// The run configuration as recorded in a manifest, using the same keys as
/// the config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEcho {
    pub circuit: String,
    pub spec: String,
    pub input_qubits: Vec<usize>,
    pub output_qubits: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub suite_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub suite_percentage: Option<f64>,
    pub population_size: usize,
    pub max_generations: usize,
    pub crossover_rate: f64,
    pub crossover_distribution_index: f64,
    pub mutation_rate: Option<f64>,
    pub mutation_distribution_index: f64,
    pub alpha: f64,
    pub master_seed: String,
    pub elitism: usize,
    pub output_dir: String,
    pub strict_domain: bool,
}

impl ConfigEcho {
    pub fn roles(&self) -> Roles {
        Roles::new(self.input_qubits.clone(), self.output_qubits.clone())
    }
}
