//! Shared helpers for integration tests: a dense-matrix reference simulator
//! built from Kronecker products, and random circuit generation.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

use qsearch::circuit::{Circuit, GateApplication, GateKind, Roles};

pub type Matrix = Vec<Vec<Complex64>>;
type M2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const I2: M2 = [
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
];
const P0: M2 = [
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
];
const P1: M2 = [
    [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
];

/// Textbook single-qubit matrices, written out independently of the crate.
fn base(kind: GateKind, theta: f64) -> M2 {
    let h = 1.0 / 2f64.sqrt();
    let (co, si) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let phase = |phi: f64| c(phi.cos(), phi.sin());
    match kind {
        GateKind::X | GateKind::Cx | GateKind::Ccx => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        GateKind::Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        GateKind::Z | GateKind::Cz => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        GateKind::H => [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
        GateKind::S => [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), phase(std::f64::consts::FRAC_PI_2)],
        ],
        GateKind::Sdg => [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), phase(-std::f64::consts::FRAC_PI_2)],
        ],
        GateKind::T => [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), phase(std::f64::consts::FRAC_PI_4)],
        ],
        GateKind::Tdg => [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), phase(-std::f64::consts::FRAC_PI_4)],
        ],
        // exp(-i θ/2 σ)
        GateKind::Rx => [[c(co, 0.0), c(0.0, -si)], [c(0.0, -si), c(co, 0.0)]],
        GateKind::Ry => [[c(co, 0.0), c(-si, 0.0)], [c(si, 0.0), c(co, 0.0)]],
        GateKind::Rz => [[phase(-theta / 2.0), c(0.0, 0.0)], [c(0.0, 0.0), phase(theta / 2.0)]],
        GateKind::Swap | GateKind::Cswap => unreachable!(),
    }
}

/// `⊗` over all qubits, highest qubit leftmost, so qubit k is bit k of the index.
fn kron_all(n: usize, factors: &[(usize, M2)]) -> Matrix {
    let mut out: Matrix = vec![vec![c(1.0, 0.0)]];
    for q in (0..n).rev() {
        let f = factors.iter().find(|(k, _)| *k == q).map(|(_, m)| *m).unwrap_or(I2);
        let d = out.len();
        let mut next = vec![vec![c(0.0, 0.0); 2 * d]; 2 * d];
        for a in 0..2 {
            for b in 0..2 {
                for i in 0..d {
                    for j in 0..d {
                        next[i * 2 + a][j * 2 + b] = out[i][j] * f[a][b];
                    }
                }
            }
        }
        out = next;
    }
    out
}

fn add(a: &mut Matrix, b: &Matrix, scale: Complex64) {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x += scale * y;
        }
    }
}

fn zeros(d: usize) -> Matrix {
    vec![vec![c(0.0, 0.0); d]; d]
}

/// `I - P + P ⊗ U` where `P` projects the controls onto |1…1⟩.
fn controlled(n: usize, controls: &[usize], target_terms: &[(Complex64, Vec<(usize, M2)>)]) -> Matrix {
    let d = 1 << n;
    let proj: Vec<(usize, M2)> = controls.iter().map(|&q| (q, P1)).collect();
    let mut u = kron_all(n, &[]);
    add(&mut u, &kron_all(n, &proj), c(-1.0, 0.0));
    let mut body = zeros(d);
    for (coef, factors) in target_terms {
        let mut all = proj.clone();
        all.extend(factors.iter().cloned());
        add(&mut body, &kron_all(n, &all), *coef);
    }
    add(&mut u, &body, c(1.0, 0.0));
    u
}

/// Full `2^n × 2^n` unitary of one gate.
pub fn gate_unitary(n: usize, gate: &GateApplication) -> Matrix {
    let ops = gate.operands();
    let theta = gate.angle().unwrap_or(0.0);
    let x = base(GateKind::X, 0.0);
    let y = base(GateKind::Y, 0.0);
    let z = base(GateKind::Z, 0.0);
    // SWAP = (I + XX + YY + ZZ) / 2
    let swap_terms = |a: usize, b: usize| {
        vec![
            (c(0.5, 0.0), vec![]),
            (c(0.5, 0.0), vec![(a, x), (b, x)]),
            (c(0.5, 0.0), vec![(a, y), (b, y)]),
            (c(0.5, 0.0), vec![(a, z), (b, z)]),
        ]
    };
    match gate.kind() {
        GateKind::Swap => controlled(n, &[], &swap_terms(ops[0], ops[1])),
        GateKind::Cswap => controlled(n, &ops[..1], &swap_terms(ops[1], ops[2])),
        kind => {
            let (t, ctrl) = ops.split_last().unwrap();
            controlled(n, ctrl, &[(c(1.0, 0.0), vec![(*t, base(kind, theta))])])
        }
    }
}

pub fn mat_vec(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Reference amplitudes of `circuit` on `input` (MSB-first over input qubits).
pub fn dense_run(circuit: &Circuit, input: &str) -> Vec<Complex64> {
    let n = circuit.num_qubits();
    let width = input.len();
    let mut index = 0usize;
    for (k, &q) in circuit.input_qubits().iter().enumerate() {
        if input.as_bytes()[width - 1 - k] == b'1' {
            index |= 1 << q;
        }
    }
    let mut psi = vec![c(0.0, 0.0); 1 << n];
    psi[index] = c(1.0, 0.0);
    for g in circuit.gates() {
        psi = mat_vec(&gate_unitary(n, g), &psi);
    }
    psi
}

/// A random gate on `n` qubits drawn from every kind that fits.
pub fn random_gate<R: Rng>(n: usize, rng: &mut R) -> GateApplication {
    let kinds: Vec<GateKind> = GateKind::ALL.iter().copied().filter(|k| k.arity() <= n).collect();
    let kind = kinds[rng.random_range(0..kinds.len())];
    let mut qubits: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        qubits.swap(i, rng.random_range(0..=i));
    }
    qubits.truncate(kind.arity());
    let angle = kind
        .is_rotation()
        .then(|| rng.random_range(-2.0 * std::f64::consts::PI..2.0 * std::f64::consts::PI));
    GateApplication::new(kind, qubits, angle).unwrap()
}

/// Random circuit on `n` qubits with `gates` gates; every qubit is both input and output.
pub fn random_circuit<R: Rng>(n: usize, gates: usize, rng: &mut R) -> Circuit {
    let gs = (0..gates).map(|_| random_gate(n, rng)).collect();
    let all: Vec<usize> = (0..n).collect();
    Circuit::new(n, gs, &Roles::new(all.clone(), all)).unwrap()
}

/// Frozen `(statistic, df, upper-tail p)` triples.
pub fn chi2_table() -> Vec<(f64, usize, f64)> {
    include_str!("../data/chi2_table.txt")
        .lines()
        .filter_map(|l| {
            if !l.trim().starts_with('(') {
                return None;
            }
            let t = l
                .trim()
                .trim_end_matches(',')
                .trim_start_matches('(')
                .trim_end_matches(')');
            let parts: Vec<&str> = t.split(',').map(str::trim).collect();
            (parts.len() == 3).then(|| {
                (
                    parts[0].parse().unwrap(),
                    parts[1].parse().unwrap(),
                    parts[2].parse().unwrap(),
                )
            })
        })
        .collect()
}
