//! Search-based generation of failing test suites for quantum programs.
//!
//! A quantum program is a [`circuit::Circuit`] with declared input and output
//! qubits; its intended behaviour is a [`spec::ProgramSpec`] giving the
//! expected output distribution per input. The [`search`] module evolves a
//! suite of `M` inputs with a genetic algorithm so that as many tests as
//! possible fail one of the two oracles in [`assess`]: an output the
//! specification forbids, or an output distribution that a Pearson
//! chi-square test rejects.
//!
//! The runnable programs under `examples/` walk through each piece; the
//! `qsearch` binary wraps [`cli`] for command-line use.

pub mod assess;
pub mod bits;
pub mod circuit;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod rng;
pub mod search;
pub mod simulator;
pub mod spec;

pub use error::{Error, Result};
