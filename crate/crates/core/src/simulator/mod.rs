//! Exact statevector simulation with terminal measurement.
//!
//! A run prepares `|0…0⟩`, flips the input qubits selected by the input
//! bitstring, applies the gate list in place and then reads off the exact
//! marginal distribution over the output qubits. Shots are drawn from that
//! distribution by [`sample_outputs`]; since every measurement is terminal
//! this is equivalent to simulating each shot separately.

mod kernels;
mod sampling;

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::bits;
use crate::circuit::Circuit;

pub use sampling::sample_outputs;

pub const DEFAULT_MAX_QUBITS: usize = 20;

/// Marginal probabilities below this are treated as exactly zero.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SimulationError {
    #[error("circuit has {num_qubits} qubits, above the simulator cap of {max_qubits} (raise max_qubits to override)")]
    QubitCap { num_qubits: usize, max_qubits: usize },

    #[error("input `{input}` is not a {expected}-bit string over the input qubits")]
    BadInput { input: String, expected: usize },

    #[error("non-finite amplitude after gate {gate_index}")]
    NonFiniteAmplitude { gate_index: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        StateVector { amplitudes }
    }

    /// Wraps raw amplitudes. The length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Self {
        assert!(amplitudes.len().is_power_of_two(), "length must be 2^n");
        StateVector { amplitudes }
    }

    pub fn num_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply(&mut self, gate: &crate::circuit::GateApplication) {
        kernels::apply_gate(&mut self.amplitudes, gate);
    }
}

/// Probability of each output bitstring with nonzero mass.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputDistribution {
    width: usize,
    probs: BTreeMap<String, f64>,
}

impl OutputDistribution {
    /// Builds a distribution from explicit probabilities. Entries at or
    /// below [`PRUNE_THRESHOLD`] are dropped.
    pub fn new(width: usize, probs: impl IntoIterator<Item = (String, f64)>) -> Self {
        let probs = probs.into_iter().filter(|(_, p)| *p > PRUNE_THRESHOLD).collect();
        OutputDistribution { width, probs }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn probs(&self) -> &BTreeMap<String, f64> {
        &self.probs
    }

    pub fn get(&self, output: &str) -> f64 {
        self.probs.get(output).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Simulator {
    pub max_qubits: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Simulator {
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

impl Simulator {
    pub fn with_max_qubits(max_qubits: usize) -> Self {
        Simulator { max_qubits }
    }

    pub fn run_statevector(&self, circuit: &Circuit, input: &str) -> Result<StateVector, SimulationError> {
        let n = circuit.num_qubits();
        if n > self.max_qubits {
            return Err(SimulationError::QubitCap {
                num_qubits: n,
                max_qubits: self.max_qubits,
            });
        }
        let width = circuit.input_qubits().len();
        let value = bits::is_bitstring(input, width)
            .then(|| bits::from_bits(input))
            .flatten()
            .ok_or_else(|| SimulationError::BadInput {
                input: input.to_string(),
                expected: width,
            })?;

        let mut basis = 0usize;
        for (k, &q) in circuit.input_qubits().iter().enumerate() {
            if (value >> k) & 1 == 1 {
                basis |= 1 << q;
            }
        }
        let mut sv = StateVector::zero(n);
        sv.amplitudes.swap(0, basis);
        for gate in circuit.gates() {
            sv.apply(gate);
        }
        if !sv.norm().is_finite() {
            let gate_index = first_non_finite_gate(circuit, basis);
            return Err(SimulationError::NonFiniteAmplitude { gate_index });
        }
        Ok(sv)
    }

    /// Exact output distribution for `input`: simulate, then marginalize.
    pub fn distribution(&self, circuit: &Circuit, input: &str) -> Result<OutputDistribution, SimulationError> {
        let sv = self.run_statevector(circuit, input)?;
        Ok(output_distribution(&sv, circuit))
    }
}

fn first_non_finite_gate(circuit: &Circuit, basis: usize) -> usize {
    let mut sv = StateVector::zero(circuit.num_qubits());
    sv.amplitudes.swap(0, basis);
    for (i, gate) in circuit.gates().iter().enumerate() {
        sv.apply(gate);
        if !sv.norm().is_finite() {
            return i;
        }
    }
    circuit.gates().len()
}

/// Runs `circuit` on `input` with the default qubit cap.
pub fn run_statevector(circuit: &Circuit, input: &str) -> Result<StateVector, SimulationError> {
    Simulator::default().run_statevector(circuit, input)
}

/// Marginal distribution of `sv` over `circuit`'s output qubits.
pub fn output_distribution(sv: &StateVector, circuit: &Circuit) -> OutputDistribution {
    let outputs = circuit.output_qubits();
    let mut mass = vec![0.0f64; 1 << outputs.len()];
    for (basis, amp) in sv.amplitudes().iter().enumerate() {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let o = outputs
            .iter()
            .enumerate()
            .fold(0usize, |acc, (k, &q)| acc | (((basis >> q) & 1) << k));
        mass[o] += p;
    }
    OutputDistribution::new(
        outputs.len(),
        mass.into_iter()
            .enumerate()
            .map(|(o, p)| (bits::to_bits(o, outputs.len()), p)),
    )
}
