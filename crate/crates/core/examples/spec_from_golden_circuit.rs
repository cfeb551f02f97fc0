//! Derive a specification from a trusted circuit and use it to catch a
//! modified version.
//!
//! cargo run --example spec_from_golden_circuit

use qsearch::cli::{genspec, InputSelection};
use qsearch::corpus::{Variant, BERNSTEIN_VAZIRANI};
use qsearch::search::{run_search, SearchConfig, SearchContext, SuiteSize};
use qsearch::spec::print_spec;

fn main() -> qsearch::Result<()> {
    let golden = BERNSTEIN_VAZIRANI.circuit(Variant::Correct)?;
    let spec = genspec(&golden, &InputSelection::All, false)?;
    let text = print_spec(&spec);
    println!("{}", text.lines().take(9).collect::<Vec<_>>().join("\n"));
    println!("  ... {} inputs in total\n", spec.entries().len());

    let faulty = BERNSTEIN_VAZIRANI.circuit(Variant::FaultUof)?;
    let cfg = SearchConfig {
        suite_size: SuiteSize::Percentage(0.25),
        master_seed: 11,
        ..SearchConfig::default()
    };
    let report = run_search(&SearchContext::new(&faulty, &spec, cfg, true)?)?;
    for run in &report.best.executions {
        let e = &run.execution;
        println!("input {}  observed {:?}  failed={}", e.input, e.observed, e.failed);
    }
    Ok(())
}
