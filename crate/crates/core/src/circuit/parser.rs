//! Parser for the OpenQASM 2.0 subset: header, `include`, `qreg`/`creg`,
//! the sixteen standard gates, `barrier` (ignored) and terminal `measure`
//! (discarded; measurement happens in the simulator).

use std::collections::{HashMap, HashSet};

use super::{Circuit, CircuitError, GateApplication, GateKind, Pos, Roles};

/// Parses `source` into a [`Circuit`] whose qubits are the quantum registers
/// flattened in declaration order.
pub fn parse_circuit(source: &str, roles: &Roles) -> Result<Circuit, CircuitError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser {
        tokens,
        at: 0,
        qregs: Vec::new(),
        names: HashSet::new(),
        cregs: HashMap::new(),
        num_qubits: 0,
        measured: HashSet::new(),
        gates: Vec::new(),
    };
    parser.program()?;
    Circuit::new(parser.num_qubits, parser.gates, roles)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: Pos,
}

const SYMBOLS: [&str; 15] = [
    "->", "==", "{", "}", ";", ",", "[", "]", "(", ")", "+", "-", "*", "/", "^",
];

fn tokenize(source: &str) -> Result<Vec<Token>, CircuitError> {
    let mut tokens = Vec::new();
    for (line_idx, line) in source.lines().enumerate() {
        let line_no = line_idx + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos {
                line: line_no,
                column: i + 1,
            };
            if c.is_whitespace() {
                i += 1;
            } else if c == '/' && chars.get(i + 1) == Some(&'/') {
                break;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    pos,
                });
            } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let value = text.parse::<f64>().map_err(|_| CircuitError::Syntax {
                    pos,
                    message: format!("malformed number `{text}`"),
                })?;
                tokens.push(Token {
                    tok: Tok::Number(value),
                    pos,
                });
            } else if c == '"' {
                let start = i + 1;
                let Some(len) = chars[start..].iter().position(|&ch| ch == '"') else {
                    return Err(CircuitError::Syntax {
                        pos,
                        message: "unterminated string".into(),
                    });
                };
                tokens.push(Token {
                    tok: Tok::Str(chars[start..start + len].iter().collect()),
                    pos,
                });
                i = start + len + 1;
            } else if let Some(sym) = SYMBOLS
                .iter()
                .find(|s| s.chars().enumerate().all(|(k, sc)| chars.get(i + k) == Some(&sc)))
            {
                tokens.push(Token {
                    tok: Tok::Sym(sym),
                    pos,
                });
                i += sym.len();
            } else {
                return Err(CircuitError::Syntax {
                    pos,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    let eof = Pos {
        line: source.lines().count().max(1),
        column: source.lines().last().map_or(1, |l| l.chars().count() + 1),
    };
    tokens.push(Token {
        tok: Tok::Eof,
        pos: eof,
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    /// (name, global offset, size) in declaration order.
    qregs: Vec<(String, usize, usize)>,
    names: HashSet<String>,
    cregs: HashMap<String, usize>,
    num_qubits: usize,
    measured: HashSet<usize>,
    gates: Vec<GateApplication>,
}

/// A gate or measure argument: either one qubit or a whole register.
enum Arg {
    Single(usize),
    Register(Vec<usize>),
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, pos: Pos, message: impl Into<String>) -> Result<T, CircuitError> {
        Err(CircuitError::Syntax {
            pos,
            message: message.into(),
        })
    }

    fn expect_sym(&mut self, sym: &'static str) -> Result<Pos, CircuitError> {
        let t = self.next();
        match t.tok {
            Tok::Sym(s) if s == sym => Ok(t.pos),
            other => self.syntax(t.pos, format!("expected `{sym}`, found {}", describe(&other))),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Pos), CircuitError> {
        let t = self.next();
        match t.tok {
            Tok::Ident(s) => Ok((s, t.pos)),
            other => self.syntax(t.pos, format!("expected identifier, found {}", describe(&other))),
        }
    }

    fn expect_size(&mut self) -> Result<usize, CircuitError> {
        let t = self.next();
        match t.tok {
            Tok::Number(v) if v.fract() == 0.0 && (0.0..1e9).contains(&v) => Ok(v as usize),
            other => self.syntax(
                t.pos,
                format!("expected non-negative integer, found {}", describe(&other)),
            ),
        }
    }

    fn program(&mut self) -> Result<(), CircuitError> {
        let head = self.next();
        match head.tok {
            Tok::Ident(ref s) if s == "OPENQASM" => {}
            other => {
                return self.syntax(
                    head.pos,
                    format!("expected `OPENQASM 2.0;` header, found {}", describe(&other)),
                )
            }
        }
        let version = self.next();
        match version.tok {
            Tok::Number(2.0) => {}
            other => {
                return Err(CircuitError::Unsupported {
                    pos: version.pos,
                    what: format!("OpenQASM version {}", describe(&other)),
                })
            }
        }
        self.expect_sym(";")?;
        loop {
            let t = self.next();
            match t.tok {
                Tok::Eof => return Ok(()),
                Tok::Ident(word) => self.statement(word, t.pos)?,
                other => return self.syntax(t.pos, format!("expected statement, found {}", describe(&other))),
            }
        }
    }

    fn statement(&mut self, word: String, pos: Pos) -> Result<(), CircuitError> {
        match word.as_str() {
            "include" => {
                let t = self.next();
                if !matches!(t.tok, Tok::Str(_)) {
                    return self.syntax(t.pos, "expected file name string after `include`");
                }
                self.expect_sym(";")?;
            }
            "qreg" | "creg" => {
                let (name, name_pos) = self.expect_ident()?;
                self.expect_sym("[")?;
                let size = self.expect_size()?;
                self.expect_sym("]")?;
                self.expect_sym(";")?;
                if !self.names.insert(name.clone()) {
                    return Err(CircuitError::DuplicateRegister { pos: name_pos, name });
                }
                if word == "qreg" {
                    self.qregs.push((name, self.num_qubits, size));
                    self.num_qubits += size;
                } else {
                    self.cregs.insert(name, size);
                }
            }
            "barrier" => {
                self.arguments()?;
                self.expect_sym(";")?;
            }
            "measure" => self.measure()?,
            "reset" | "if" | "gate" | "opaque" => {
                return Err(CircuitError::Unsupported {
                    pos,
                    what: format!("statement `{word}`"),
                })
            }
            _ => self.gate(word, pos)?,
        }
        Ok(())
    }

    fn measure(&mut self) -> Result<(), CircuitError> {
        let qarg = self.argument()?;
        self.expect_sym("->")?;
        let (creg, cpos) = self.expect_ident()?;
        let Some(&csize) = self.cregs.get(&creg) else {
            return self.syntax(cpos, format!("unknown classical register `{creg}`"));
        };
        if matches!(self.peek().tok, Tok::Sym("[")) {
            self.next();
            let idx_pos = self.peek().pos;
            let idx = self.expect_size()?;
            self.expect_sym("]")?;
            if idx >= csize {
                return Err(CircuitError::IndexOutOfRange {
                    pos: idx_pos,
                    register: creg,
                    index: idx,
                    size: csize,
                });
            }
        }
        self.expect_sym(";")?;
        match qarg {
            Arg::Single(q) => {
                self.measured.insert(q);
            }
            Arg::Register(qs) => self.measured.extend(qs),
        }
        Ok(())
    }

    fn gate(&mut self, name: String, pos: Pos) -> Result<(), CircuitError> {
        let Some(kind) = GateKind::from_qasm_name(&name) else {
            return Err(CircuitError::Unsupported {
                pos,
                what: format!("gate `{name}`"),
            });
        };
        let angle = if kind.is_rotation() {
            self.expect_sym("(")?;
            let value = self.expr()?;
            self.expect_sym(")")?;
            if !value.is_finite() {
                return self.syntax(pos, format!("{name} angle evaluates to {value}"));
            }
            Some(value)
        } else {
            if matches!(self.peek().tok, Tok::Sym("(")) {
                return self.syntax(self.peek().pos, format!("gate `{name}` takes no parameters"));
            }
            None
        };
        let args = self.arguments()?;
        self.expect_sym(";")?;
        if args.len() != kind.arity() {
            return self.syntax(
                pos,
                format!(
                    "gate `{name}` takes {} qubit argument(s), got {}",
                    kind.arity(),
                    args.len()
                ),
            );
        }
        // Whole-register arguments broadcast over the register elements.
        let width = args.iter().find_map(|a| match a {
            Arg::Register(qs) => Some(qs.len()),
            Arg::Single(_) => None,
        });
        let rounds = width.unwrap_or(1);
        if args
            .iter()
            .any(|a| matches!(a, Arg::Register(qs) if qs.len() != rounds))
        {
            return self.syntax(pos, format!("register arguments of `{name}` differ in size"));
        }
        for r in 0..rounds {
            let operands: Vec<usize> = args
                .iter()
                .map(|a| match a {
                    Arg::Single(q) => *q,
                    Arg::Register(qs) => qs[r],
                })
                .collect();
            if let Some(q) = operands.iter().find(|q| self.measured.contains(q)) {
                return Err(CircuitError::Unsupported {
                    pos,
                    what: format!("mid-circuit measurement (gate `{name}` acts on measured qubit {q})"),
                });
            }
            let gate = GateApplication::new(kind, operands, angle).map_err(|e| match e {
                CircuitError::InvalidGate(message) => CircuitError::Syntax { pos, message },
                other => other,
            })?;
            self.gates.push(gate);
        }
        Ok(())
    }

    fn arguments(&mut self) -> Result<Vec<Arg>, CircuitError> {
        let mut args = vec![self.argument()?];
        while matches!(self.peek().tok, Tok::Sym(",")) {
            self.next();
            args.push(self.argument()?);
        }
        Ok(args)
    }

    fn argument(&mut self) -> Result<Arg, CircuitError> {
        let (name, pos) = self.expect_ident()?;
        let Some((_, offset, size)) = self.qregs.iter().find(|(n, _, _)| *n == name).cloned() else {
            return self.syntax(pos, format!("unknown quantum register `{name}`"));
        };
        if !matches!(self.peek().tok, Tok::Sym("[")) {
            return Ok(Arg::Register((offset..offset + size).collect()));
        }
        self.next();
        let idx_pos = self.peek().pos;
        let idx = self.expect_size()?;
        self.expect_sym("]")?;
        if idx >= size {
            return Err(CircuitError::IndexOutOfRange {
                pos: idx_pos,
                register: name,
                index: idx,
                size,
            });
        }
        Ok(Arg::Single(offset + idx))
    }

    fn expr(&mut self) -> Result<f64, CircuitError> {
        let mut value = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Sym("+") => {
                    self.next();
                    value += self.term()?;
                }
                Tok::Sym("-") => {
                    self.next();
                    value -= self.term()?;
                }
                _ => return Ok(value),
            }
        }
    }

    fn term(&mut self) -> Result<f64, CircuitError> {
        let mut value = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Sym("*") => {
                    self.next();
                    value *= self.unary()?;
                }
                Tok::Sym("/") => {
                    self.next();
                    value /= self.unary()?;
                }
                _ => return Ok(value),
            }
        }
    }

    fn unary(&mut self) -> Result<f64, CircuitError> {
        match self.peek().tok {
            Tok::Sym("-") => {
                self.next();
                Ok(-self.unary()?)
            }
            Tok::Sym("+") => {
                self.next();
                self.unary()
            }
            _ => {
                let base = self.primary()?;
                if matches!(self.peek().tok, Tok::Sym("^")) {
                    self.next();
                    Ok(base.powf(self.unary()?))
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn primary(&mut self) -> Result<f64, CircuitError> {
        let t = self.next();
        match t.tok {
            Tok::Number(v) => Ok(v),
            Tok::Ident(ref id) if id == "pi" => Ok(std::f64::consts::PI),
            Tok::Ident(ref id) => {
                let f: fn(f64) -> f64 = match id.as_str() {
                    "sin" => f64::sin,
                    "cos" => f64::cos,
                    "tan" => f64::tan,
                    "exp" => f64::exp,
                    "ln" => f64::ln,
                    "sqrt" => f64::sqrt,
                    _ => return self.syntax(t.pos, format!("unknown identifier `{id}` in expression")),
                };
                self.expect_sym("(")?;
                let v = self.expr()?;
                self.expect_sym(")")?;
                Ok(f(v))
            }
            Tok::Sym("(") => {
                let v = self.expr()?;
                self.expect_sym(")")?;
                Ok(v)
            }
            other => self.syntax(t.pos, format!("expected expression, found {}", describe(&other))),
        }
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Number(v) => format!("`{v}`"),
        Tok::Str(s) => format!("\"{s}\""),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use GateKind::*;

    const SWAP_TEST: &str = r#"OPENQASM 2.0;
include "qelib1.inc";
qreg qreg_i1[1];
qreg qreg_i2[1];
qreg qreg_oq[1];
creg creg_oc[1];
h qreg_oq[0];
cswap qreg_oq[0],qreg_i1[0],qreg_i2[0];
h qreg_oq[0];
x qreg_oq[0];
measure qreg_oq[0] -> creg_oc[0];
"#;

    fn roles(i: &[usize], o: &[usize]) -> Roles {
        Roles::new(i.to_vec(), o.to_vec())
    }

    #[test]
    fn swap_test_flattens_registers() {
        let c = parse_circuit(SWAP_TEST, &roles(&[0, 1], &[2])).unwrap();
        assert_eq!(c.num_qubits(), 3);
        let expect = vec![
            GateApplication::fixed(H, &[2]),
            GateApplication::fixed(Cswap, &[2, 0, 1]),
            GateApplication::fixed(H, &[2]),
            GateApplication::fixed(X, &[2]),
        ];
        assert_eq!(c.gates(), expect.as_slice());
        assert_eq!(c.input_qubits(), &[0, 1]);
        assert_eq!(c.output_qubits(), &[2]);
    }

    #[test]
    fn empty_body_is_identity_program() {
        let c = parse_circuit("OPENQASM 2.0;\nqreg q[1];\n", &roles(&[0], &[0])).unwrap();
        assert!(c.gates().is_empty());
    }

    #[test]
    fn reset_is_unsupported() {
        let err = parse_circuit("OPENQASM 2.0;\nqreg q[1];\nreset q[0];\n", &roles(&[0], &[0])).unwrap_err();
        assert_eq!(
            err,
            CircuitError::Unsupported {
                pos: Pos { line: 3, column: 1 },
                what: "statement `reset`".into()
            }
        );
    }

    #[test]
    fn rejects_if_and_unknown_gates() {
        let src = "OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nif(c==1) x q[0];\n";
        assert!(matches!(
            parse_circuit(src, &roles(&[0], &[0])),
            Err(CircuitError::Unsupported { .. })
        ));
        let src = "OPENQASM 2.0;\nqreg q[1];\nu3(0,0,0) q[0];\n";
        let err = parse_circuit(src, &roles(&[0], &[0])).unwrap_err();
        assert_eq!(err.to_string(), "unsupported gate `u3` at 3:1");
    }

    #[test]
    fn mid_circuit_measure_rejected() {
        let src = "OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\nmeasure q[0] -> c[0];\nx q[0];\n";
        let err = parse_circuit(src, &roles(&[1], &[0])).unwrap_err();
        assert!(err.to_string().contains("mid-circuit measurement"), "{err}");
        // measuring one qubit then acting on another is fine
        let src = "OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\nmeasure q[0] -> c[0];\nx q[1];\n";
        assert!(parse_circuit(src, &roles(&[1], &[0])).is_ok());
    }

    #[test]
    fn index_out_of_range_has_position() {
        let src = "OPENQASM 2.0;\nqreg q[2];\nh q[2];\n";
        assert_eq!(
            parse_circuit(src, &roles(&[0], &[1])).unwrap_err(),
            CircuitError::IndexOutOfRange {
                pos: Pos { line: 3, column: 5 },
                register: "q".into(),
                index: 2,
                size: 2
            }
        );
    }

    #[test]
    fn duplicate_register() {
        let src = "OPENQASM 2.0;\nqreg q[2];\ncreg q[2];\n";
        assert!(matches!(
            parse_circuit(src, &roles(&[0], &[1])),
            Err(CircuitError::DuplicateRegister { .. })
        ));
    }

    #[test]
    fn syntax_error_position() {
        let src = "OPENQASM 2.0;\nqreg q[2];\nh q[0]\nx q[1];\n";
        let err = parse_circuit(src, &roles(&[0], &[1])).unwrap_err();
        assert_eq!(
            err,
            CircuitError::Syntax {
                pos: Pos { line: 4, column: 1 },
                message: "expected `;`, found `x`".into()
            }
        );
        assert!(matches!(
            parse_circuit("qreg q[1];", &roles(&[0], &[0])),
            Err(CircuitError::Syntax { .. })
        ));
    }

    #[test]
    fn role_references_unknown_qubit() {
        let src = "OPENQASM 2.0;\nqreg q[2];\n";
        assert!(matches!(
            parse_circuit(src, &roles(&[0], &[7])),
            Err(CircuitError::UnknownRoleQubit { qubit: 7, .. })
        ));
    }

    #[test]
    fn angle_expressions() {
        let src =
            "OPENQASM 2.0;\nqreg q[1];\nrx(pi/2) q[0];\nry(-2*pi/3) q[0];\nrz(1.5e-1 + (0.25)) q[0];\nrx(2^3) q[0];\n";
        let c = parse_circuit(src, &roles(&[0], &[0])).unwrap();
        let angles: Vec<f64> = c.gates().iter().map(|g| g.angle().unwrap()).collect();
        assert_eq!(angles[0], std::f64::consts::FRAC_PI_2);
        assert!((angles[1] + 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-15);
        assert!((angles[2] - 0.4).abs() < 1e-15);
        assert_eq!(angles[3], 8.0);
    }

    #[test]
    fn register_broadcast_and_barrier() {
        let src = "OPENQASM 2.0;\nqreg a[2];\nqreg b[2];\nh a;\ncx a,b;\nbarrier a,b;\nx a[1];\n";
        let c = parse_circuit(src, &roles(&[0, 1], &[2, 3])).unwrap();
        assert_eq!(
            c.gates(),
            &[
                GateApplication::fixed(H, &[0]),
                GateApplication::fixed(H, &[1]),
                GateApplication::fixed(Cx, &[0, 2]),
                GateApplication::fixed(Cx, &[1, 3]),
                GateApplication::fixed(X, &[1]),
            ]
        );
    }

    #[test]
    fn repeated_operand_is_a_syntax_error() {
        let src = "OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[0];\n";
        assert!(matches!(
            parse_circuit(src, &roles(&[0], &[1])),
            Err(CircuitError::Syntax { .. })
        ));
    }
}
