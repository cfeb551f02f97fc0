//! Parse an OpenQASM 2.0 program, simulate it on every input, and sample
//! the output the way a test would.
//!
//! cargo run --example parse_and_simulate

use qsearch::bits::to_bits;
use qsearch::circuit::{emit_qasm, parse_circuit, Roles};
use qsearch::simulator::{sample_outputs, Simulator};

const SOURCE: &str = r#"
OPENQASM 2.0;
include "qelib1.inc";
qreg i1[1];
qreg i2[1];
qreg oq[1];
creg c[1];
h oq[0];
cswap oq[0],i1[0],i2[0];
h oq[0];
x oq[0];
measure oq[0] -> c[0];
"#;

fn main() -> qsearch::Result<()> {
    // registers are flattened in declaration order: i1 = 0, i2 = 1, oq = 2
    let circuit = parse_circuit(SOURCE, &Roles::new([0, 1], [2]))?;
    println!("{} qubits, {} gates", circuit.num_qubits(), circuit.gates().len());

    let sim = Simulator::default();
    for v in 0..circuit.input_domain_size() {
        // bitstrings are MSB-first; the first input qubit is the last character
        let input = to_bits(v, circuit.input_qubits().len());
        let dist = sim.distribution(&circuit, &input)?;
        let counts = sample_outputs(&dist, 200, 42);
        println!("input {input}: exact {:?}  sampled {:?}", dist.probs(), counts);
    }

    println!("\nnormalized program:\n{}", emit_qasm(&circuit));
    Ok(())
}
