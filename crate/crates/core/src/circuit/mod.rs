//! Quantum program model: a gate list over `num_qubits` qubits plus the
//! declared input and output qubit roles.
//!
//! Qubit `k` corresponds to bit `k` of a computational-basis index. Circuits
//! come from [`parse_circuit`] (an OpenQASM 2.0 subset) or are built directly
//! with [`Circuit::new`]; either way every invariant is checked on
//! construction and the value is immutable afterwards.

mod emit;
mod parser;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use emit::emit_qasm;
pub use parser::parse_circuit;

/// Source position, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: Pos, message: String },

    #[error("unsupported {what} at {pos}")]
    Unsupported { pos: Pos, what: String },

    #[error("qubit index {index} out of range for register `{register}` of size {size} at {pos}")]
    IndexOutOfRange {
        pos: Pos,
        register: String,
        index: usize,
        size: usize,
    },

    #[error("duplicate register name `{name}` at {pos}")]
    DuplicateRegister { pos: Pos, name: String },

    #[error("circuit declares no qubits")]
    NoQubits,

    #[error("gate {kind} references qubit {qubit} but the circuit has {num_qubits} qubits")]
    QubitOutOfRange {
        kind: GateKind,
        qubit: usize,
        num_qubits: usize,
    },

    #[error("invalid gate application: {0}")]
    InvalidGate(String),

    #[error("{role}_qubits references unknown qubit {qubit} (circuit has {num_qubits} qubits)")]
    UnknownRoleQubit {
        role: &'static str,
        qubit: usize,
        num_qubits: usize,
    },

    #[error("{role}_qubits lists qubit {qubit} more than once")]
    DuplicateRoleQubit { role: &'static str, qubit: usize },

    #[error("{role}_qubits must not be empty")]
    EmptyRole { role: &'static str },
}

/// The supported gate set, spelled as in Qiskit's QASM output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Rx,
    Ry,
    Rz,
    Cx,
    Cz,
    Swap,
    Ccx,
    Cswap,
}

impl GateKind {
    pub const ALL: [GateKind; 16] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::Cx,
        GateKind::Cz,
        GateKind::Swap,
        GateKind::Ccx,
        GateKind::Cswap,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cz | GateKind::Swap => 2,
            GateKind::Ccx | GateKind::Cswap => 3,
            _ => 1,
        }
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz)
    }

    pub fn qasm_name(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
            GateKind::Ccx => "ccx",
            GateKind::Cswap => "cswap",
        }
    }

    pub fn from_qasm_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.qasm_name() == name)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.qasm_name())
    }
}

/// One gate applied to concrete qubit indices. Controls come first in
/// `operands`, matching QASM argument order.
#[derive(Clone, Debug, PartialEq)]
pub struct GateApplication {
    kind: GateKind,
    operands: Vec<usize>,
    angle: Option<f64>,
}

impl GateApplication {
    pub fn new(kind: GateKind, operands: Vec<usize>, angle: Option<f64>) -> Result<Self, CircuitError> {
        if operands.len() != kind.arity() {
            return Err(CircuitError::InvalidGate(format!(
                "{kind} takes {} qubit(s), got {}",
                kind.arity(),
                operands.len()
            )));
        }
        for (i, q) in operands.iter().enumerate() {
            if operands[..i].contains(q) {
                return Err(CircuitError::InvalidGate(format!(
                    "{kind} operands must be distinct, qubit {q} repeated"
                )));
            }
        }
        match (kind.is_rotation(), angle) {
            (true, Some(a)) if a.is_finite() => {}
            (true, Some(a)) => {
                return Err(CircuitError::InvalidGate(format!(
                    "{kind} angle must be finite, got {a}"
                )))
            }
            (true, None) => return Err(CircuitError::InvalidGate(format!("{kind} requires an angle"))),
            (false, Some(_)) => return Err(CircuitError::InvalidGate(format!("{kind} takes no angle"))),
            (false, None) => {}
        }
        Ok(GateApplication { kind, operands, angle })
    }

    /// Shorthand for non-rotation gates. Panics on an invalid application.
    pub fn fixed(kind: GateKind, operands: &[usize]) -> Self {
        Self::new(kind, operands.to_vec(), None).expect("valid fixed gate")
    }

    /// Shorthand for rotation gates. Panics on an invalid application.
    pub fn rotation(kind: GateKind, qubit: usize, angle: f64) -> Self {
        Self::new(kind, vec![qubit], Some(angle)).expect("valid rotation gate")
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn operands(&self) -> &[usize] {
        &self.operands
    }

    pub fn angle(&self) -> Option<f64> {
        self.angle
    }
}

/// Which qubits carry the program input and which are observed as output.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roles {
    pub input: Vec<usize>,
    pub output: Vec<usize>,
}

impl Roles {
    pub fn new(input: impl Into<Vec<usize>>, output: impl Into<Vec<usize>>) -> Self {
        Roles {
            input: input.into(),
            output: output.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    name: String,
    num_qubits: usize,
    gates: Vec<GateApplication>,
    input_qubits: Vec<usize>,
    output_qubits: Vec<usize>,
}

impl Circuit {
    pub fn new(num_qubits: usize, gates: Vec<GateApplication>, roles: &Roles) -> Result<Self, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        for gate in &gates {
            if let Some(&q) = gate.operands.iter().find(|&&q| q >= num_qubits) {
                return Err(CircuitError::QubitOutOfRange {
                    kind: gate.kind,
                    qubit: q,
                    num_qubits,
                });
            }
        }
        check_role("input", &roles.input, num_qubits)?;
        check_role("output", &roles.output, num_qubits)?;
        Ok(Circuit {
            name: "main".to_string(),
            num_qubits,
            gates,
            input_qubits: roles.input.clone(),
            output_qubits: roles.output.clone(),
        })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[GateApplication] {
        &self.gates
    }

    pub fn input_qubits(&self) -> &[usize] {
        &self.input_qubits
    }

    pub fn output_qubits(&self) -> &[usize] {
        &self.output_qubits
    }

    pub fn roles(&self) -> Roles {
        Roles::new(self.input_qubits.clone(), self.output_qubits.clone())
    }

    /// Size of the input domain, `2^|input_qubits|`. Saturates at `usize::MAX`.
    pub fn input_domain_size(&self) -> usize {
        1usize.checked_shl(self.input_qubits.len() as u32).unwrap_or(usize::MAX)
    }
}

/// Free-function form of [`Circuit::input_domain_size`].
pub fn input_domain_size(circuit: &Circuit) -> usize {
    circuit.input_domain_size()
}

fn check_role(role: &'static str, qubits: &[usize], num_qubits: usize) -> Result<(), CircuitError> {
    if qubits.is_empty() {
        return Err(CircuitError::EmptyRole { role });
    }
    for (i, &q) in qubits.iter().enumerate() {
        if q >= num_qubits {
            return Err(CircuitError::UnknownRoleQubit {
                role,
                qubit: q,
                num_qubits,
            });
        }
        if qubits[..i].contains(&q) {
            return Err(CircuitError::DuplicateRoleQubit { role, qubit: q });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_arity_and_angle_checks() {
        assert!(GateApplication::new(GateKind::Cx, vec![0], None).is_err());
        assert!(GateApplication::new(GateKind::Cx, vec![1, 1], None).is_err());
        assert!(GateApplication::new(GateKind::Rx, vec![0], None).is_err());
        assert!(GateApplication::new(GateKind::Rx, vec![0], Some(f64::NAN)).is_err());
        assert!(GateApplication::new(GateKind::H, vec![0], Some(0.1)).is_err());
        assert!(GateApplication::new(GateKind::Cswap, vec![2, 0, 1], None).is_ok());
    }

    #[test]
    fn role_validation() {
        let gates = vec![GateApplication::fixed(GateKind::H, &[0])];
        assert_eq!(
            Circuit::new(2, gates.clone(), &Roles::new([0, 0], [1])),
            Err(CircuitError::DuplicateRoleQubit {
                role: "input",
                qubit: 0
            })
        );
        assert_eq!(
            Circuit::new(2, gates.clone(), &Roles::new([0], [])),
            Err(CircuitError::EmptyRole { role: "output" })
        );
        assert!(matches!(
            Circuit::new(2, gates.clone(), &Roles::new([0], [5])),
            Err(CircuitError::UnknownRoleQubit { qubit: 5, .. })
        ));
        // overlapping roles are allowed
        assert!(Circuit::new(2, gates, &Roles::new([0, 1], [1, 0])).is_ok());
    }

    #[test]
    fn gate_out_of_range() {
        let gates = vec![GateApplication::fixed(GateKind::Cx, &[0, 3])];
        assert!(matches!(
            Circuit::new(2, gates, &Roles::new([0], [1])),
            Err(CircuitError::QubitOutOfRange { qubit: 3, .. })
        ));
    }

    #[test]
    fn domain_size() {
        let mk = |k: usize| Circuit::new(k + 1, vec![], &Roles::new((0..k).collect::<Vec<_>>(), [k])).unwrap();
        assert_eq!(mk(2).input_domain_size(), 4);
        assert_eq!(mk(10).input_domain_size(), 1024);
        assert_eq!(input_domain_size(&mk(9)), 512);
    }
}
