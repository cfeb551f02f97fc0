//! Command-line front end: argument parsing, dispatch, and exit codes.
//!
//! Exit codes: 0 success, 1 replay found failing tests, 2 user error,
//! 3 internal error.

mod commands;
pub mod config;
pub mod manifest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{
    cmd_bench, cmd_generate, cmd_genspec, cmd_replay, genspec, load_circuit_file, load_spec_file, render_bench,
    render_report, BenchOptions, BenchRow, GenerateOutcome, InputSelection, ReplayReport, ReplayRow, SeedMode,
    GENSPEC_MAX_ALL_INPUTS, MANIFEST_FILE, REPORT_FILE,
};
pub use config::{ConfigFile, RunConfig};
pub use manifest::SuiteManifest;

use crate::circuit::Roles;
use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "qsearch",
    version,
    about = "Search-based test generation for quantum programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a failing test suite and write suite.json and suite.report.txt.
    Generate(GenerateArgs),
    /// Re-run the tests of a saved suite.
    Replay(ReplayArgs),
    /// Write a specification from the exact distributions of a trusted circuit.
    Genspec(GenspecArgs),
    /// Run the bundled benchmarks and print a summary table.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Run configuration file (TOML); flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    circuit: Option<PathBuf>,
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    input_qubits: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    output_qubits: Option<Vec<usize>>,
    /// Absolute number of tests per suite.
    #[arg(long, conflicts_with = "suite_percentage")]
    suite_size: Option<usize>,
    /// Tests per suite as a fraction of the search domain.
    #[arg(long)]
    suite_percentage: Option<f64>,
    #[arg(long)]
    population_size: Option<usize>,
    #[arg(long)]
    max_generations: Option<usize>,
    #[arg(long)]
    crossover_rate: Option<f64>,
    #[arg(long)]
    crossover_distribution_index: Option<f64>,
    #[arg(long)]
    mutation_rate: Option<f64>,
    #[arg(long)]
    mutation_distribution_index: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Master seed, decimal or 0x hex.
    #[arg(long, alias = "seed", value_parser = config::parse_seed)]
    master_seed: Option<u64>,
    #[arg(long)]
    elitism: Option<usize>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Require the specification to list every input.
    #[arg(long, overrides_with = "no_strict_domain")]
    strict_domain: bool,
    /// Search only the inputs the specification lists.
    #[arg(long)]
    no_strict_domain: bool,
}

impl GenerateArgs {
    fn into_config(self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let strict_domain = if self.strict_domain {
            Some(true)
        } else if self.no_strict_domain {
            Some(false)
        } else {
            None
        };
        let flags = ConfigFile {
            circuit: self.circuit,
            spec: self.spec,
            input_qubits: self.input_qubits,
            output_qubits: self.output_qubits,
            suite_size: self.suite_size,
            suite_percentage: self.suite_percentage,
            population_size: self.population_size,
            max_generations: self.max_generations,
            crossover_rate: self.crossover_rate,
            crossover_distribution_index: self.crossover_distribution_index,
            mutation_rate: self.mutation_rate,
            mutation_distribution_index: self.mutation_distribution_index,
            alpha: self.alpha,
            master_seed: self.master_seed.map(config::SeedValue::Int),
            elitism: self.elitism,
            output_dir: self.output_dir,
            strict_domain,
        };
        let resolved = file.merge(flags).resolve();
        match (resolved, &self.config) {
            (Err(e @ (Error::Usage(_) | Error::Config(_))), Some(path)) => Err(Error::in_file(path, e)),
            (r, _) => r,
        }
    }
}

#[derive(Debug, Args)]
struct ReplayArgs {
    manifest: PathBuf,
    /// Circuit file; defaults to the path recorded in the manifest.
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// Specification file; defaults to the path recorded in the manifest.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Draw new sampling seeds instead of reusing the recorded ones.
    #[arg(long)]
    fresh: bool,
    /// Master seed for --fresh (default: derived from the clock).
    #[arg(long, requires = "fresh", value_parser = config::parse_seed)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct GenspecArgs {
    circuit: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    input_qubits: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    output_qubits: Vec<usize>,
    /// `all`, or a comma-separated list of input bitstrings.
    #[arg(long, default_value = "all")]
    inputs: String,
    /// Allow `all` for more than 16 input qubits.
    #[arg(long)]
    allow_large: bool,
    /// Output file; prints to stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Seeds per benchmark variant.
    #[arg(long, default_value_t = 1)]
    seeds: usize,
    /// First master seed; run k uses first_seed + k.
    #[arg(long, default_value = "1", value_parser = config::parse_seed)]
    first_seed: u64,
}

/// Parses `args` (including the program name), runs the command, and
/// returns the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Generate(args) => {
            let cfg = args.into_config()?;
            let out = cmd_generate(&cfg)?;
            for note in &out.report.notes {
                eprintln!("note: {note}");
            }
            let s = &out.manifest.summary;
            println!(
                "{} of {} tests fail ({:.1}%); wrote {} and {}",
                s.failing,
                s.suite_size,
                s.failing_percent,
                out.manifest_path.display(),
                out.report_path.display()
            );
            Ok(0)
        }
        Command::Replay(args) => {
            let mode = if args.fresh {
                SeedMode::Fresh(args.seed.unwrap_or_else(clock_seed))
            } else {
                SeedMode::Recorded
            };
            let report = cmd_replay(&args.manifest, args.circuit.as_deref(), args.spec.as_deref(), mode)?;
            print!("{}", report.render());
            Ok(if report.failing() > 0 { 1 } else { 0 })
        }
        Command::Genspec(args) => {
            let inputs = if args.inputs == "all" {
                InputSelection::All
            } else {
                InputSelection::List(args.inputs.split(',').map(|s| s.trim().to_string()).collect())
            };
            let roles = Roles::new(args.input_qubits, args.output_qubits);
            let text = cmd_genspec(&args.circuit, &roles, &inputs, args.allow_large, args.output.as_deref())?;
            match &args.output {
                Some(path) => println!("wrote {}", path.display()),
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Bench(args) => {
            if args.seeds == 0 {
                return Err(Error::Usage("--seeds must be at least 1".into()));
            }
            let opts = BenchOptions {
                seeds: args.seeds,
                first_seed: args.first_seed,
                ..BenchOptions::default()
            };
            print!("{}", render_bench(&cmd_bench(&opts)?));
            Ok(0)
        }
    }
}

fn clock_seed() -> u64 {
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0);
    crate::rng::mix(nanos)
}
