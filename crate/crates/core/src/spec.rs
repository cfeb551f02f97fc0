//! Program specifications: for each input bitstring, the expected
//! probability of every output that may occur.
//!
//! On disk a specification is a JSON object mapping input bitstrings to
//! objects mapping output bitstrings to probabilities:
//!
//! ```json
//! { "00": { "1": 1.0 }, "01": { "0": 0.5, "1": 0.5 } }
//! ```
//!
//! Outputs with probability zero are omitted, so "output `h` is not
//! expected for input `i`" is simply the absence of the key.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::de::{Deserialize, Deserializer, MapAccess, Visitor};
use thiserror::Error;

use crate::bits;
use crate::circuit::Circuit;

/// Allowed deviation of a row's probability sum from 1.
pub const SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum SpecError {
    #[error("malformed specification: {0}")]
    Malformed(String),

    #[error("specification has no input entries")]
    Empty,

    #[error("duplicate key `{key}`{}", context.as_ref().map(|c| format!(" in row `{c}`")).unwrap_or_default())]
    DuplicateKey { key: String, context: Option<String> },

    #[error("{what} key `{key}` is not a {expected}-bit string")]
    WidthMismatch {
        what: &'static str,
        key: String,
        expected: usize,
    },

    #[error("probability for input `{input}`, output `{output}` is {value}; must lie in (0, 1]")]
    Probability { input: String, output: String, value: f64 },

    #[error("probabilities for input `{input}` sum to {sum}, not 1 (tolerance {SUM_TOLERANCE})")]
    ProbabilitySum { input: String, sum: f64 },

    #[error("input `{0}` is not listed in the specification")]
    UnknownInput(String),

    #[error("strict domain requires all {expected} inputs, specification lists {listed}")]
    IncompleteDomain { expected: usize, listed: usize },
}

type Row = BTreeMap<String, f64>;

#[derive(Clone, Debug, PartialEq)]
pub struct ProgramSpec {
    entries: BTreeMap<String, Row>,
    input_width: usize,
    output_width: usize,
}

impl ProgramSpec {
    /// Validates and wraps explicit entries.
    pub fn from_entries(
        entries: BTreeMap<String, Row>,
        input_width: usize,
        output_width: usize,
    ) -> Result<Self, SpecError> {
        if entries.is_empty() {
            return Err(SpecError::Empty);
        }
        for (input, row) in &entries {
            if !bits::is_bitstring(input, input_width) {
                return Err(SpecError::WidthMismatch {
                    what: "input",
                    key: input.clone(),
                    expected: input_width,
                });
            }
            for (output, &p) in row {
                if !bits::is_bitstring(output, output_width) {
                    return Err(SpecError::WidthMismatch {
                        what: "output",
                        key: output.clone(),
                        expected: output_width,
                    });
                }
                if !(p > 0.0 && p <= 1.0) {
                    return Err(SpecError::Probability {
                        input: input.clone(),
                        output: output.clone(),
                        value: p,
                    });
                }
            }
            let sum: f64 = row.values().sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return Err(SpecError::ProbabilitySum {
                    input: input.clone(),
                    sum,
                });
            }
        }
        Ok(ProgramSpec {
            entries,
            input_width,
            output_width,
        })
    }

    pub fn input_width(&self) -> usize {
        self.input_width
    }

    pub fn output_width(&self) -> usize {
        self.output_width
    }

    pub fn entries(&self) -> &BTreeMap<String, Row> {
        &self.entries
    }

    /// Inputs listed in the specification, in ascending numeric order.
    pub fn inputs(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn row(&self, input: &str) -> Result<&Row, SpecError> {
        self.entries
            .get(input)
            .ok_or_else(|| SpecError::UnknownInput(input.to_string()))
    }

    /// Expected probability of `output` for `input` (0 when unlisted).
    pub fn probability(&self, input: &str, output: &str) -> Result<f64, SpecError> {
        Ok(self.row(input)?.get(output).copied().unwrap_or(0.0))
    }

    /// The inputs the search may draw from. With `strict`, the specification
    /// must enumerate all `2^input_width` inputs.
    pub fn search_domain(&self, strict: bool) -> Result<Vec<String>, SpecError> {
        if strict {
            let expected = 1usize.checked_shl(self.input_width as u32).unwrap_or(usize::MAX);
            if self.entries.len() != expected {
                return Err(SpecError::IncompleteDomain {
                    expected,
                    listed: self.entries.len(),
                });
            }
        }
        Ok(self.entries.keys().cloned().collect())
    }
}

/// Parses a JSON specification for `circuit`, checking widths against its
/// input and output qubit counts.
pub fn load_spec(source: &str, circuit: &Circuit) -> Result<ProgramSpec, SpecError> {
    parse_spec(source, circuit.input_qubits().len(), circuit.output_qubits().len())
}

/// Like [`load_spec`] with explicit widths.
pub fn parse_spec(source: &str, input_width: usize, output_width: usize) -> Result<ProgramSpec, SpecError> {
    let raw: Pairs<Pairs<f64>> = serde_json::from_str(source).map_err(|e| SpecError::Malformed(e.to_string()))?;
    let mut entries = BTreeMap::new();
    let mut seen = HashSet::new();
    for (input, row) in raw.0 {
        if !seen.insert(input.clone()) {
            return Err(SpecError::DuplicateKey {
                key: input,
                context: None,
            });
        }
        let mut outputs = BTreeMap::new();
        for (output, p) in row.0 {
            if outputs.insert(output.clone(), p).is_some() {
                return Err(SpecError::DuplicateKey {
                    key: output,
                    context: Some(input),
                });
            }
        }
        entries.insert(input, outputs);
    }
    ProgramSpec::from_entries(entries, input_width, output_width)
}

/// Serializes `spec` as pretty-printed JSON with keys in ascending order.
pub fn print_spec(spec: &ProgramSpec) -> String {
    let mut text = serde_json::to_string_pretty(&spec.entries).expect("string-keyed maps serialize");
    text.push('\n');
    text
}

/// Outputs with nonzero expected probability for `input`.
pub fn expected_outputs<'a>(spec: &'a ProgramSpec, input: &str) -> Result<BTreeSet<&'a str>, SpecError> {
    Ok(spec.row(input)?.keys().map(String::as_str).collect())
}

/// JSON object read as an ordered list of pairs, keeping duplicate keys so
/// they can be reported instead of silently overwritten.
struct Pairs<V>(Vec<(String, V)>);

impl<'de, V: Deserialize<'de>> Deserialize<'de> for Pairs<V> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PairsVisitor<V>(std::marker::PhantomData<V>);

        impl<'de, V: Deserialize<'de>> Visitor<'de> for PairsVisitor<V> {
            type Value = Pairs<V>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a JSON object")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut pairs = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, V>()? {
                    pairs.push((k, v));
                }
                Ok(Pairs(pairs))
            }
        }

        deserializer.deserialize_map(PairsVisitor(std::marker::PhantomData))
    }
}
