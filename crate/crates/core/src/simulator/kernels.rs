//! In-place gate kernels. Each kernel walks the amplitude array with the
//! target bit's stride and only touches index pairs whose control bits are
//! all set; no dense operator is ever built.

use num_complex::Complex64;

use crate::circuit::{GateApplication, GateKind};

type Mat2 = [[Complex64; 2]; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2×2 unitary acting on the target of `kind` (the last operand).
/// Controlled kinds return the matrix of their target action.
pub(crate) fn gate_matrix(kind: GateKind, angle: Option<f64>) -> Mat2 {
    use std::f64::consts::{FRAC_1_SQRT_2 as R, FRAC_PI_4};
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let theta = angle.unwrap_or(0.0);
    let (cos, sin) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    match kind {
        GateKind::X | GateKind::Cx | GateKind::Ccx => [[zero, one], [one, zero]],
        GateKind::Y => [[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]],
        GateKind::Z | GateKind::Cz => [[one, zero], [zero, c(-1.0, 0.0)]],
        GateKind::H => [[c(R, 0.0), c(R, 0.0)], [c(R, 0.0), c(-R, 0.0)]],
        GateKind::S => [[one, zero], [zero, c(0.0, 1.0)]],
        GateKind::Sdg => [[one, zero], [zero, c(0.0, -1.0)]],
        GateKind::T => [[one, zero], [zero, Complex64::from_polar(1.0, FRAC_PI_4)]],
        GateKind::Tdg => [[one, zero], [zero, Complex64::from_polar(1.0, -FRAC_PI_4)]],
        GateKind::Rx => [[c(cos, 0.0), c(0.0, -sin)], [c(0.0, -sin), c(cos, 0.0)]],
        GateKind::Ry => [[c(cos, 0.0), c(-sin, 0.0)], [c(sin, 0.0), c(cos, 0.0)]],
        GateKind::Rz => [
            [Complex64::from_polar(1.0, -theta / 2.0), zero],
            [zero, Complex64::from_polar(1.0, theta / 2.0)],
        ],
        GateKind::Swap | GateKind::Cswap => unreachable!("swap kinds have no 2x2 form"),
    }
}

pub(crate) fn apply_gate(state: &mut [Complex64], gate: &GateApplication) {
    let ops = gate.operands();
    match gate.kind() {
        GateKind::Swap => swap(state, ops[0], ops[1], 0),
        GateKind::Cswap => swap(state, ops[1], ops[2], 1 << ops[0]),
        kind => {
            let (target, controls) = ops.split_last().expect("gate has operands");
            let mask = controls.iter().fold(0usize, |m, &q| m | (1 << q));
            single(state, *target, mask, &gate_matrix(kind, gate.angle()));
        }
    }
}

fn single(state: &mut [Complex64], target: usize, controls: usize, m: &Mat2) {
    let stride = 1usize << target;
    for block in (0..state.len()).step_by(stride << 1) {
        for i in block..block + stride {
            if i & controls != controls {
                continue;
            }
            let j = i | stride;
            let (a, b) = (state[i], state[j]);
            state[i] = m[0][0] * a + m[0][1] * b;
            state[j] = m[1][0] * a + m[1][1] * b;
        }
    }
}

fn swap(state: &mut [Complex64], a: usize, b: usize, controls: usize) {
    let (ma, mb) = (1usize << a, 1usize << b);
    for i in 0..state.len() {
        if i & ma != 0 && i & mb == 0 && i & controls == controls {
            state.swap(i, i ^ ma ^ mb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize, idx: usize) -> Vec<Complex64> {
        let mut v = vec![c(0.0, 0.0); 1 << n];
        v[idx] = c(1.0, 0.0);
        v
    }

    fn nonzero(v: &[Complex64]) -> Vec<usize> {
        (0..v.len()).filter(|&i| v[i].norm() > 1e-12).collect()
    }

    #[test]
    fn controlled_gates_on_basis_states() {
        // |q2 q1 q0> = |011>: ccx(0,1 -> 2) sets q2
        let mut s = basis(3, 0b011);
        apply_gate(&mut s, &GateApplication::fixed(GateKind::Ccx, &[0, 1, 2]));
        assert_eq!(nonzero(&s), vec![0b111]);

        let mut s = basis(3, 0b001);
        apply_gate(&mut s, &GateApplication::fixed(GateKind::Ccx, &[0, 1, 2]));
        assert_eq!(nonzero(&s), vec![0b001]);

        // cswap(control 2; swap 0,1) on |101> -> |110>
        let mut s = basis(3, 0b101);
        apply_gate(&mut s, &GateApplication::fixed(GateKind::Cswap, &[2, 0, 1]));
        assert_eq!(nonzero(&s), vec![0b110]);

        let mut s = basis(3, 0b001);
        apply_gate(&mut s, &GateApplication::fixed(GateKind::Cswap, &[2, 0, 1]));
        assert_eq!(nonzero(&s), vec![0b001]);

        let mut s = basis(2, 0b01);
        apply_gate(&mut s, &GateApplication::fixed(GateKind::Cx, &[0, 1]));
        assert_eq!(nonzero(&s), vec![0b11]);

        let mut s = basis(2, 0b11);
        apply_gate(&mut s, &GateApplication::fixed(GateKind::Cz, &[1, 0]));
        assert_eq!(s[3], c(-1.0, 0.0));
    }

    #[test]
    fn rotations_match_named_gates() {
        use std::f64::consts::PI;
        let close = |a: Mat2, b: Mat2, phase: Complex64| {
            (0..2).all(|r| (0..2).all(|k| (a[r][k] - phase * b[r][k]).norm() < 1e-15))
        };
        // rx(pi) = -i X, ry(pi) = -i Y, rz(pi) = -i Z
        let mi = c(0.0, -1.0);
        assert!(close(
            gate_matrix(GateKind::Rx, Some(PI)),
            gate_matrix(GateKind::X, None),
            mi
        ));
        assert!(close(
            gate_matrix(GateKind::Ry, Some(PI)),
            gate_matrix(GateKind::Y, None),
            mi
        ));
        assert!(close(
            gate_matrix(GateKind::Rz, Some(PI)),
            gate_matrix(GateKind::Z, None),
            mi
        ));
    }
}
