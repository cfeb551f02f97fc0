use std::fmt::Write;

use super::Circuit;

/// Renders `circuit` as OpenQASM 2.0 over a single register `q`, with a
/// terminal measurement of the output qubits into register `c`.
///
/// Angles are printed with shortest round-trip precision, so
/// `parse_circuit(&emit_qasm(c), &c.roles())` reproduces `c` exactly.
pub fn emit_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "// {}", circuit.name());
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", circuit.num_qubits());
    let _ = writeln!(out, "creg c[{}];", circuit.output_qubits().len());
    for gate in circuit.gates() {
        out.push_str(gate.kind().qasm_name());
        if let Some(angle) = gate.angle() {
            let _ = write!(out, "({angle:?})");
        }
        let args: Vec<String> = gate.operands().iter().map(|q| format!("q[{q}]")).collect();
        let _ = writeln!(out, " {};", args.join(","));
    }
    for (k, q) in circuit.output_qubits().iter().enumerate() {
        let _ = writeln!(out, "measure q[{q}] -> c[{k}];");
    }
    out
}
