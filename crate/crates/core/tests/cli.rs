//! End-to-end runs of the `qsearch` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qsearch::cli::{cmd_replay, SeedMode, SuiteManifest};

const BIN: &str = env!("CARGO_BIN_EXE_qsearch");

fn bench_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("benchmarks").join(name)
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// A scratch directory holding a copy of one benchmark.
fn workspace(bench: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(bench_dir(bench)).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    dir
}

fn generate_args<'a>(circuit: &'a str, out: &'a str, seed: &'a str) -> Vec<&'a str> {
    vec![
        "generate",
        "--circuit",
        circuit,
        "--spec",
        "spec.json",
        "--input-qubits",
        "0,1",
        "--output-qubits",
        "2",
        "--suite-percentage",
        "1.0",
        "--seed",
        seed,
        "--output-dir",
        out,
    ]
}

#[test]
fn generate_is_deterministic_and_replays() {
    let ws = workspace("swap_test");
    let dir = ws.path();
    for out in ["a", "b"] {
        let o = run(dir, &generate_args("fault_wodf.qasm", out, "7"));
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let a = SuiteManifest::load(&dir.join("a/suite.json")).unwrap();
    let b = SuiteManifest::load(&dir.join("b/suite.json")).unwrap();
    assert_eq!(a.config.output_dir, "a");
    let strip = |m: &SuiteManifest| {
        let mut m = m.without_timing();
        m.config.output_dir.clear();
        m.to_json()
    };
    assert_eq!(strip(&a), strip(&b));
    assert!(a.summary.failing_percent >= 50.0);
    assert!(dir.join("a/suite.report.txt").exists());

    let o = run(dir, &["replay", "a/suite.json"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains("0 verdicts flipped"), "{}", stdout(&o));

    // a deterministic fault keeps failing under fresh seeds
    let o = run(dir, &generate_args("fault_uof.qasm", "c", "3"));
    assert_eq!(o.status.code(), Some(0));
    let c = SuiteManifest::load(&dir.join("c/suite.json")).unwrap();
    let o = run(dir, &["replay", "c/suite.json", "--fresh", "--seed", "99"]);
    assert_eq!(o.status.code(), Some(1));
    let fresh = cmd_replay(
        &dir.join("c/suite.json"),
        Some(&dir.join("fault_uof.qasm")),
        Some(&dir.join("spec.json")),
        SeedMode::Fresh(99),
    )
    .unwrap();
    let uof_tests: Vec<_> = c.tests.iter().filter(|t| t.uof).collect();
    assert!(!uof_tests.is_empty());
    for t in uof_tests {
        assert!(
            fresh.rows[t.index].failed && fresh.rows[t.index].uof,
            "test {}",
            t.index
        );
    }
}

#[test]
fn replay_passes_with_exit_zero() {
    let ws = workspace("bernstein_vazirani");
    let dir = ws.path();
    let o = run(
        dir,
        &[
            "generate",
            "--circuit",
            "correct.qasm",
            "--spec",
            "spec.json",
            "--input-qubits",
            "0,1,2,3",
            "--output-qubits",
            "0,1,2,3",
            "--suite-size",
            "4",
            "--max-generations",
            "3",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("0 of 4 tests fail"), "{}", stdout(&o));
    let o = run(dir, &["replay", "suite.json", "--fresh"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn config_file_with_flag_override() {
    let ws = workspace("swap_test");
    let dir = ws.path();
    let o = run(
        dir,
        &[
            "generate",
            "--config",
            "run.toml",
            "--max-generations",
            "2",
            "--output-dir",
            "x",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = SuiteManifest::load(&dir.join("x/suite.json")).unwrap();
    assert_eq!(m.config.max_generations, 2);
    assert_eq!(m.history.len(), 2);
    assert_eq!(m.config.master_seed, "0x0000000000000007");
    assert!(m.config.circuit.ends_with("fault_uof.qasm"));
}

#[test]
fn genspec_matches_shipped_spec() {
    let ws = workspace("conditional");
    let dir = ws.path();
    let o = run(
        dir,
        &[
            "genspec",
            "correct.qasm",
            "--input-qubits",
            "0,1",
            "--output-qubits",
            "2,3",
            "-o",
            "gen.json",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let got: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("gen.json")).unwrap()).unwrap();
    let want: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("spec.json")).unwrap()).unwrap();
    for (input, row) in want.as_object().unwrap() {
        for (o, p) in row.as_object().unwrap() {
            let g = got[input][o].as_f64().unwrap();
            assert!((g - p.as_f64().unwrap()).abs() < 1e-12);
        }
        assert_eq!(got[input].as_object().unwrap().len(), row.as_object().unwrap().len());
    }
}

#[test]
fn bench_prints_every_variant() {
    let o = run(Path::new("."), &["bench"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 10, "{text}");
    assert!(text.contains("conditional") && text.contains("fault_wodf"));
}

/// Each case writes its files, runs one command, and compares stderr (with
/// the scratch path replaced by `{dir}`) against `tests/golden/<name>.stderr`.
/// Set `UPDATE_GOLDEN=1` to rewrite the golden files.
#[test]
fn error_messages_match_golden_files() {
    let swap = std::fs::read_to_string(bench_dir("swap_test").join("correct.qasm")).unwrap();
    let spec = std::fs::read_to_string(bench_dir("swap_test").join("spec.json")).unwrap();
    let base_cfg = "circuit = \"correct.qasm\"\nspec = \"spec.json\"\ninput_qubits = [0, 1]\noutput_qubits = [2]\n";
    let newer_manifest = r#"{"schema_version": "2.0"}"#;
    let u3 = "OPENQASM 2.0;\nqreg q[3];\nh q[0];\nu3(0.1,0.2,0.3) q[1];\n";
    let seventeen = "OPENQASM 2.0;\nqreg q[17];\n".to_string();
    // (golden name, files to write, arguments, exit code)
    type Case<'a> = (&'a str, Vec<(&'a str, String)>, Vec<&'a str>, i32);
    let cases: Vec<Case> = vec![
        (
            "missing_spec",
            vec![("correct.qasm", swap.clone())],
            vec![
                "generate",
                "--circuit",
                "correct.qasm",
                "--spec",
                "missing.json",
                "--input-qubits",
                "0,1",
                "--output-qubits",
                "2",
            ],
            2,
        ),
        (
            "unknown_config_key",
            vec![("c.toml", format!("{base_cfg}populaton = 4\n"))],
            vec!["generate", "--config", "c.toml"],
            2,
        ),
        (
            "missing_config_key",
            vec![("c.toml", "spec = \"spec.json\"\n".into())],
            vec!["generate", "--config", "c.toml"],
            2,
        ),
        (
            "invalid_elitism",
            vec![("c.toml", format!("{base_cfg}elitism = 0\n"))],
            vec!["generate", "--config", "c.toml"],
            2,
        ),
        (
            "unsupported_gate",
            vec![("u3.qasm", u3.into()), ("spec.json", spec.clone())],
            vec![
                "generate",
                "--circuit",
                "u3.qasm",
                "--spec",
                "spec.json",
                "--input-qubits",
                "0,1",
                "--output-qubits",
                "2",
            ],
            2,
        ),
        (
            "spec_width_mismatch",
            vec![("correct.qasm", swap.clone()), ("spec.json", spec.clone())],
            vec![
                "generate",
                "--circuit",
                "correct.qasm",
                "--spec",
                "spec.json",
                "--input-qubits",
                "0",
                "--output-qubits",
                "2",
            ],
            2,
        ),
        (
            "unknown_role_qubit",
            vec![("correct.qasm", swap.clone()), ("spec.json", spec.clone())],
            vec![
                "generate",
                "--circuit",
                "correct.qasm",
                "--spec",
                "spec.json",
                "--input-qubits",
                "0,5",
                "--output-qubits",
                "2",
            ],
            2,
        ),
        (
            "newer_manifest",
            vec![("suite.json", newer_manifest.into())],
            vec!["replay", "suite.json"],
            2,
        ),
        (
            "genspec_too_many_inputs",
            vec![("big.qasm", seventeen)],
            vec![
                "genspec",
                "big.qasm",
                "--input-qubits",
                "0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16",
                "--output-qubits",
                "0",
            ],
            2,
        ),
    ];
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let golden_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, files, args, code) in cases {
        let ws = tempfile::tempdir().unwrap();
        for (file, contents) in &files {
            std::fs::write(ws.path().join(file), contents).unwrap();
        }
        let o = run(ws.path(), &args);
        assert_eq!(o.status.code(), Some(code), "{name}: {}", stderr(&o));
        let got = stderr(&o).replace(&ws.path().display().to_string(), "{dir}");
        let path = golden_dir.join(format!("{name}.stderr"));
        if update {
            std::fs::write(&path, &got).unwrap();
        } else {
            let want =
                std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
            assert_eq!(got, want, "{name}");
        }
    }
}

#[test]
fn replay_refuses_modified_circuit() {
    let ws = workspace("swap_test");
    let dir = ws.path();
    assert_eq!(
        run(dir, &generate_args("fault_uof.qasm", ".", "1")).status.code(),
        Some(0)
    );
    std::fs::write(
        dir.join("other.qasm"),
        std::fs::read_to_string(dir.join("correct.qasm")).unwrap(),
    )
    .unwrap();
    let o = run(dir, &["replay", "suite.json", "--circuit", "other.qasm"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("error: other.qasm: content hash"), "{err}");
    assert!(err.contains("refusing to replay against a different circuit"), "{err}");
}
