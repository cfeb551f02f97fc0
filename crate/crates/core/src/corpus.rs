//! The bundled benchmark programs, embedded at compile time.
//!
//! Each program ships a correct circuit, a fault that produces impossible
//! outputs, and a fault that skews the output distribution, all checked
//! against one specification.

use crate::circuit::{parse_circuit, Circuit, Roles};
use crate::error::{Error, Result};
use crate::search::SuiteSize;
use crate::spec::{load_spec, ProgramSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Correct,
    FaultUof,
    FaultWodf,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Correct, Variant::FaultUof, Variant::FaultWodf];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Correct => "correct",
            Variant::FaultUof => "fault_uof",
            Variant::FaultWodf => "fault_wodf",
        }
    }

    pub fn is_faulty(self) -> bool {
        self != Variant::Correct
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Benchmark {
    pub name: &'static str,
    pub input_qubits: &'static [usize],
    pub output_qubits: &'static [usize],
    /// Chosen so that every suite has at least four tests.
    pub suite_size: SuiteSize,
    pub spec: &'static str,
    correct: &'static str,
    fault_uof: &'static str,
    fault_wodf: &'static str,
}

macro_rules! bench_file {
    ($dir:literal, $file:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/benchmarks/", $dir, "/", $file))
    };
}

pub const SWAP_TEST: Benchmark = Benchmark {
    name: "swap_test",
    input_qubits: &[0, 1],
    output_qubits: &[2],
    suite_size: SuiteSize::Percentage(1.0),
    spec: bench_file!("swap_test", "spec.json"),
    correct: bench_file!("swap_test", "correct.qasm"),
    fault_uof: bench_file!("swap_test", "fault_uof.qasm"),
    fault_wodf: bench_file!("swap_test", "fault_wodf.qasm"),
};

pub const BERNSTEIN_VAZIRANI: Benchmark = Benchmark {
    name: "bernstein_vazirani",
    input_qubits: &[0, 1, 2, 3],
    output_qubits: &[0, 1, 2, 3],
    suite_size: SuiteSize::Percentage(0.25),
    spec: bench_file!("bernstein_vazirani", "spec.json"),
    correct: bench_file!("bernstein_vazirani", "correct.qasm"),
    fault_uof: bench_file!("bernstein_vazirani", "fault_uof.qasm"),
    fault_wodf: bench_file!("bernstein_vazirani", "fault_wodf.qasm"),
};

pub const CONDITIONAL: Benchmark = Benchmark {
    name: "conditional",
    input_qubits: &[0, 1],
    output_qubits: &[2, 3],
    suite_size: SuiteSize::Percentage(1.0),
    spec: bench_file!("conditional", "spec.json"),
    correct: bench_file!("conditional", "correct.qasm"),
    fault_uof: bench_file!("conditional", "fault_uof.qasm"),
    fault_wodf: bench_file!("conditional", "fault_wodf.qasm"),
};

pub const ALL: [Benchmark; 3] = [SWAP_TEST, BERNSTEIN_VAZIRANI, CONDITIONAL];

/// Swap test with a small stray rotation whose distribution verdicts sit
/// near the significance threshold.
pub const SWAP_BORDERLINE: &str = bench_file!("swap_test", "borderline.qasm");

impl Benchmark {
    pub fn roles(&self) -> Roles {
        Roles::new(self.input_qubits, self.output_qubits)
    }

    pub fn source(&self, variant: Variant) -> &'static str {
        match variant {
            Variant::Correct => self.correct,
            Variant::FaultUof => self.fault_uof,
            Variant::FaultWodf => self.fault_wodf,
        }
    }

    pub fn circuit(&self, variant: Variant) -> Result<Circuit> {
        let c = parse_circuit(self.source(variant), &self.roles())?;
        Ok(c.named(format!("{}/{}", self.name, variant.name())))
    }

    pub fn program_spec(&self) -> Result<ProgramSpec> {
        let c = self.circuit(Variant::Correct)?;
        Ok(load_spec(self.spec, &c)?)
    }
}

pub fn find(name: &str) -> Result<Benchmark> {
    ALL.iter()
        .copied()
        .find(|b| b.name == name)
        .ok_or_else(|| Error::Usage(format!("unknown benchmark `{name}`")))
}
