use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use super::config::{format_seed, RunConfig};
use super::manifest::{sha256_hex, Hashes, SuiteManifest, Summary, TestRecord, Timing, ToolInfo, SCHEMA_VERSION};
use crate::assess::expected_counts;
use crate::bits;
use crate::circuit::{parse_circuit, Circuit, Roles};
use crate::corpus::{self, Variant};
use crate::error::{Error, Result};
use crate::rng;
use crate::search::{execute_test, run_search, SearchConfig, SearchContext, SearchReport};
use crate::simulator::Simulator;
use crate::spec::{load_spec, print_spec, ProgramSpec};

pub const MANIFEST_FILE: &str = "suite.json";
pub const REPORT_FILE: &str = "suite.report.txt";

/// Largest input register `genspec` enumerates without `allow_large`.
pub const GENSPEC_MAX_ALL_INPUTS: usize = 16;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Reads and parses a circuit file, tagging errors with its path.
pub fn load_circuit_file(path: &Path, roles: &Roles) -> Result<(Circuit, String)> {
    let text = read(path)?;
    let circuit = parse_circuit(&text, roles).map_err(|e| Error::in_file(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok((circuit.named(name), text))
}

pub fn load_spec_file(path: &Path, circuit: &Circuit) -> Result<(ProgramSpec, String)> {
    let text = read(path)?;
    let spec = load_spec(&text, circuit).map_err(|e| Error::in_file(path, e))?;
    Ok((spec, text))
}

pub struct GenerateOutcome {
    pub manifest: SuiteManifest,
    pub report: SearchReport,
    pub manifest_path: PathBuf,
    pub report_path: PathBuf,
}

/// Runs the search and writes `suite.json` and `suite.report.txt`.
pub fn cmd_generate(cfg: &RunConfig) -> Result<GenerateOutcome> {
    let (circuit, circuit_text) = load_circuit_file(&cfg.circuit_path, &cfg.roles)?;
    let (spec, spec_text) = load_spec_file(&cfg.spec_path, &circuit)?;
    let ctx = SearchContext::new(&circuit, &spec, cfg.search.clone(), cfg.strict_domain).map_err(|e| match e {
        Error::Spec(_) => Error::in_file(&cfg.spec_path, e),
        e => e,
    })?;
    let report = run_search(&ctx)?;
    let manifest = build_manifest(cfg, &spec, &report, &circuit_text, &spec_text)?;

    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::io(&cfg.output_dir, e))?;
    let manifest_path = cfg.output_dir.join(MANIFEST_FILE);
    let report_path = cfg.output_dir.join(REPORT_FILE);
    write(&manifest_path, &manifest.to_json())?;
    write(&report_path, &render_report(&manifest, &report.notes))?;
    Ok(GenerateOutcome {
        manifest,
        report,
        manifest_path,
        report_path,
    })
}

fn build_manifest(
    cfg: &RunConfig,
    spec: &ProgramSpec,
    report: &SearchReport,
    circuit_text: &str,
    spec_text: &str,
) -> Result<SuiteManifest> {
    let mut tests = Vec::with_capacity(report.best.executions.len());
    for (index, run) in report.best.executions.iter().enumerate() {
        let e = &run.execution;
        tests.push(TestRecord {
            index,
            input: e.input.clone(),
            seed: format_seed(run.seed),
            repetitions: e.repetitions,
            expected: expected_counts(spec, &e.input, e.repetitions)?,
            observed: e.observed.clone(),
            uof: e.uof,
            wodf: e.wodf,
            p_value: e.p_value,
            statistic: e.statistic,
            failed: e.failed,
        });
    }
    let duplicates = report
        .best
        .duplicates()
        .into_iter()
        .map(|(gene, n)| (report.domain[gene].clone(), n))
        .collect();
    let failing = report.failing();
    Ok(SuiteManifest {
        schema_version: SCHEMA_VERSION.to_string(),
        tool: ToolInfo::current(),
        config: cfg.echo(),
        hashes: Hashes {
            circuit: sha256_hex(circuit_text.as_bytes()),
            spec: sha256_hex(spec_text.as_bytes()),
        },
        domain_size: report.domain.len(),
        tests,
        duplicates,
        history: report.history.clone(),
        summary: Summary {
            suite_size: report.suite_size,
            failing,
            failing_percent: 100.0 * failing as f64 / report.suite_size as f64,
            evaluations: report.evaluations,
        },
        timing: Timing {
            simulation_seconds: report.simulation_time.as_secs_f64(),
            search_seconds: report.search_time.as_secs_f64(),
        },
    })
}

fn verdict(uof: bool, wodf: bool) -> &'static str {
    match (uof, wodf) {
        (true, _) => "uof",
        (false, true) => "wodf",
        _ => "pass",
    }
}

fn format_counts(counts: &BTreeMap<String, usize>) -> String {
    counts
        .iter()
        .map(|(k, v)| format!("{k}:{v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn format_p(p: Option<f64>) -> String {
    p.map_or_else(|| "-".to_string(), |p| format!("{p:.4e}"))
}

/// Human-readable summary: the M / %ft / st / et row, then one line per test.
pub fn render_report(m: &SuiteManifest, notes: &[String]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "circuit  {}  (sha256 {})", m.config.circuit, m.hashes.circuit);
    let _ = writeln!(s, "spec     {}  (sha256 {})", m.config.spec, m.hashes.spec);
    let _ = writeln!(s, "seed     {}", m.config.master_seed);
    for note in notes {
        let _ = writeln!(s, "note     {note}");
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:>6} {:>8} {:>8} {:>10} {:>10}",
        "M", "failing", "%ft", "st (s)", "et (s)"
    );
    let _ = writeln!(
        s,
        "{:>6} {:>8} {:>7.1}% {:>10.3} {:>10.3}",
        m.summary.suite_size,
        m.summary.failing,
        m.summary.failing_percent,
        m.timing.simulation_seconds,
        m.timing.search_seconds
    );
    let _ = writeln!(s);
    let width = m.tests.iter().map(|t| t.input.len()).max().unwrap_or(5).max(5);
    let _ = writeln!(
        s,
        "{:>4}  {:<width$}  {:>6}  {:<7}  {:>10}  observed",
        "#", "input", "n", "verdict", "p-value"
    );
    for t in &m.tests {
        let _ = writeln!(
            s,
            "{:>4}  {:<width$}  {:>6}  {:<7}  {:>10}  {}",
            t.index,
            t.input,
            t.repetitions,
            verdict(t.uof, t.wodf),
            format_p(t.p_value),
            format_counts(&t.observed)
        );
    }
    if !m.duplicates.is_empty() {
        let dups: Vec<String> = m.duplicates.iter().map(|(i, n)| format!("{i} x{n}")).collect();
        let _ = writeln!(s, "\nduplicate inputs: {}", dups.join(", "));
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedMode {
    /// Reuse the seeds stored in the manifest; verdicts must match exactly.
    Recorded,
    /// Draw new sampling seeds from this master seed.
    Fresh(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReplayRow {
    pub index: usize,
    pub input: String,
    pub repetitions: usize,
    pub seed: u64,
    pub recorded_failed: bool,
    pub uof: bool,
    pub wodf: bool,
    pub p_value: Option<f64>,
    pub failed: bool,
}

impl ReplayRow {
    pub fn flipped(&self) -> bool {
        self.failed != self.recorded_failed
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReplayReport {
    pub mode: SeedMode,
    pub rows: Vec<ReplayRow>,
}

impl ReplayReport {
    pub fn failing(&self) -> usize {
        self.rows.iter().filter(|r| r.failed).count()
    }

    pub fn flips(&self) -> usize {
        self.rows.iter().filter(|r| r.flipped()).count()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let mode = match self.mode {
            SeedMode::Recorded => "recorded seeds".to_string(),
            SeedMode::Fresh(seed) => format!("fresh seeds from {}", format_seed(seed)),
        };
        let _ = writeln!(s, "replay with {mode}");
        let width = self.rows.iter().map(|r| r.input.len()).max().unwrap_or(5).max(5);
        let _ = writeln!(
            s,
            "{:>4}  {:<width$}  {:>6}  {:<8}  {:<7}  {:>10}",
            "#", "input", "n", "recorded", "now", "p-value"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>4}  {:<width$}  {:>6}  {:<8}  {:<7}  {:>10}{}",
                r.index,
                r.input,
                r.repetitions,
                if r.recorded_failed { "fail" } else { "pass" },
                verdict(r.uof, r.wodf),
                format_p(r.p_value),
                if r.flipped() { "  flipped" } else { "" }
            );
        }
        let _ = writeln!(
            s,
            "{} of {} tests fail; {} verdicts flipped",
            self.failing(),
            self.rows.len(),
            self.flips()
        );
        s
    }
}

fn check_hash(path: &Path, what: &'static str, text: &str, expected: &str) -> Result<()> {
    let actual = sha256_hex(text.as_bytes());
    if actual != expected {
        return Err(Error::HashMismatch {
            path: path.to_path_buf(),
            what,
            expected: expected.to_string(),
            actual,
        });
    }
    Ok(())
}

/// Re-executes every test in a manifest. Circuit and spec default to the
/// paths recorded in the manifest and must hash to the recorded values.
pub fn cmd_replay(
    manifest_path: &Path,
    circuit_path: Option<&Path>,
    spec_path: Option<&Path>,
    mode: SeedMode,
) -> Result<ReplayReport> {
    let manifest = SuiteManifest::load(manifest_path)?;
    let circuit_path = circuit_path.map_or_else(|| PathBuf::from(&manifest.config.circuit), Path::to_path_buf);
    let spec_path = spec_path.map_or_else(|| PathBuf::from(&manifest.config.spec), Path::to_path_buf);

    let circuit_text = read(&circuit_path)?;
    check_hash(&circuit_path, "circuit", &circuit_text, &manifest.hashes.circuit)?;
    let spec_text = read(&spec_path)?;
    check_hash(&spec_path, "specification", &spec_text, &manifest.hashes.spec)?;

    let circuit =
        parse_circuit(&circuit_text, &manifest.config.roles()).map_err(|e| Error::in_file(&circuit_path, e))?;
    let spec = load_spec(&spec_text, &circuit).map_err(|e| Error::in_file(&spec_path, e))?;
    let simulator = Simulator::default();
    let alpha = manifest.config.alpha;

    let mut distributions = BTreeMap::new();
    let mut rows = Vec::with_capacity(manifest.tests.len());
    for t in &manifest.tests {
        if !distributions.contains_key(&t.input) {
            distributions.insert(t.input.clone(), simulator.distribution(&circuit, &t.input)?);
        }
        let seed = match mode {
            SeedMode::Recorded => t.seed().map_err(|e| Error::Manifest {
                path: manifest_path.to_path_buf(),
                message: format!("test {}: {e}", t.index),
            })?,
            SeedMode::Fresh(master) => rng::combine(&[master, t.index as u64]),
        };
        let e = execute_test(&distributions[&t.input], &spec, &t.input, seed, alpha)?;
        if mode == SeedMode::Recorded && (e.failed != t.failed || e.observed != t.observed) {
            return Err(Error::Internal(format!(
                "recorded replay of test {} (input {}) did not reproduce the stored result",
                t.index, t.input
            )));
        }
        rows.push(ReplayRow {
            index: t.index,
            input: t.input.clone(),
            repetitions: e.repetitions,
            seed,
            recorded_failed: t.failed,
            uof: e.uof,
            wodf: e.wodf,
            p_value: e.p_value,
            failed: e.failed,
        });
    }
    Ok(ReplayReport { mode, rows })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSelection {
    All,
    List(Vec<String>),
}

/// Builds a specification from the exact output distributions of a trusted
/// circuit. Probabilities below the pruning threshold are dropped and each
/// row is renormalized.
pub fn genspec(circuit: &Circuit, inputs: &InputSelection, allow_large: bool) -> Result<ProgramSpec> {
    let width = circuit.input_qubits().len();
    let inputs: Vec<String> = match inputs {
        InputSelection::All => {
            if width > GENSPEC_MAX_ALL_INPUTS && !allow_large {
                return Err(Error::Usage(format!(
                    "refusing to enumerate all 2^{width} inputs (more than {GENSPEC_MAX_ALL_INPUTS} input qubits); \
                     list the inputs explicitly or pass --allow-large"
                )));
            }
            (0..circuit.input_domain_size())
                .map(|v| bits::to_bits(v, width))
                .collect()
        }
        InputSelection::List(list) => list.clone(),
    };
    let simulator = Simulator::default();
    let mut entries = BTreeMap::new();
    for input in inputs {
        let dist = simulator.distribution(circuit, &input)?;
        let total = dist.total();
        let row: BTreeMap<String, f64> = dist.probs().iter().map(|(o, p)| (o.clone(), p / total)).collect();
        if entries.insert(input.clone(), row).is_some() {
            return Err(Error::Usage(format!("input `{input}` listed twice")));
        }
    }
    Ok(ProgramSpec::from_entries(
        entries,
        width,
        circuit.output_qubits().len(),
    )?)
}

/// `genspec` on a circuit file; writes the result when `out` is given.
pub fn cmd_genspec(
    circuit_path: &Path,
    roles: &Roles,
    inputs: &InputSelection,
    allow_large: bool,
    out: Option<&Path>,
) -> Result<String> {
    let (circuit, _) = load_circuit_file(circuit_path, roles)?;
    let spec = genspec(&circuit, inputs, allow_large)?;
    let text = print_spec(&spec);
    if let Some(out) = out {
        write(out, &text)?;
    }
    Ok(text)
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub seeds: usize,
    pub first_seed: u64,
    pub search: SearchConfig,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            seeds: 1,
            first_seed: 1,
            search: SearchConfig::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub benchmark: &'static str,
    pub variant: Variant,
    pub qubits: usize,
    pub domain_size: usize,
    pub suite_size: usize,
    /// `%ft` of the best suite, one entry per seed.
    pub failing_percent: Vec<f64>,
    pub simulation_time: Duration,
    pub search_time: Duration,
}

impl BenchRow {
    pub fn mean_failing_percent(&self) -> f64 {
        self.failing_percent.iter().sum::<f64>() / self.failing_percent.len() as f64
    }
}

/// Runs every bundled benchmark and variant over `opts.seeds` seeds.
pub fn cmd_bench(opts: &BenchOptions) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for b in corpus::ALL {
        let spec = b.program_spec()?;
        for variant in Variant::ALL {
            let circuit = b.circuit(variant)?;
            let mut row = BenchRow {
                benchmark: b.name,
                variant,
                qubits: circuit.num_qubits(),
                domain_size: 0,
                suite_size: 0,
                failing_percent: Vec::with_capacity(opts.seeds),
                simulation_time: Duration::ZERO,
                search_time: Duration::ZERO,
            };
            let started = Instant::now();
            for k in 0..opts.seeds {
                let cfg = SearchConfig {
                    suite_size: b.suite_size,
                    master_seed: opts.first_seed.wrapping_add(k as u64),
                    ..opts.search.clone()
                };
                let ctx = SearchContext::new(&circuit, &spec, cfg, true)?;
                let report = run_search(&ctx)?;
                row.domain_size = report.domain.len();
                row.suite_size = report.suite_size;
                row.failing_percent.push(100.0 * report.failing_fraction());
                row.simulation_time += report.simulation_time;
            }
            row.search_time = started.elapsed();
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn render_bench(rows: &[BenchRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<20} {:<11} {:>6} {:>6} {:>4} {:>6} {:>8} {:>8} {:>8} {:>10} {:>10}",
        "program", "variant", "qubits", "|D_I|", "M", "runs", "%ft", "min", "max", "st (s)", "et (s)"
    );
    for r in rows {
        let min = r.failing_percent.iter().copied().fold(f64::INFINITY, f64::min);
        let max = r.failing_percent.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let _ = writeln!(
            s,
            "{:<20} {:<11} {:>6} {:>6} {:>4} {:>6} {:>7.1}% {:>7.1}% {:>7.1}% {:>10.3} {:>10.3}",
            r.benchmark,
            r.variant.name(),
            r.qubits,
            r.domain_size,
            r.suite_size,
            r.failing_percent.len(),
            r.mean_failing_percent(),
            min,
            max,
            r.simulation_time.as_secs_f64(),
            r.search_time.as_secs_f64()
        );
    }
    s
}
