//! Search for a failing suite against a faulty program, as `qsearch
//! generate` does, and write the manifest and report.
//!
//! cargo run --example generate_suite

use std::path::PathBuf;

use qsearch::cli::{cmd_generate, RunConfig};
use qsearch::corpus::CONDITIONAL;
use qsearch::search::SuiteSize;

fn main() -> qsearch::Result<()> {
    let bench = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("benchmarks/conditional");
    let mut cfg = RunConfig::new(
        bench.join("fault_wodf.qasm"),
        bench.join("spec.json"),
        CONDITIONAL.roles(),
    );
    cfg.search.suite_size = SuiteSize::Percentage(1.0);
    cfg.search.master_seed = 7;
    cfg.output_dir = std::env::temp_dir().join("qsearch-generate-example");

    let out = cmd_generate(&cfg)?;
    print!(
        "{}",
        std::fs::read_to_string(&out.report_path).expect("report was just written")
    );

    println!("\nbest-ever fitness by generation:");
    let line: Vec<String> = out.report.history.iter().map(|g| g.best_ever.to_string()).collect();
    println!("{}", line.join(" "));
    println!("\nmanifest: {}", out.manifest_path.display());
    Ok(())
}
