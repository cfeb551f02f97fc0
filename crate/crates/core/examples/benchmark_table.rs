//! Every bundled benchmark over a few seeds, as `qsearch bench` prints it.
//!
//! cargo run --release --example benchmark_table

use qsearch::cli::{cmd_bench, render_bench, BenchOptions};

fn main() -> qsearch::Result<()> {
    let opts = BenchOptions {
        seeds: 5,
        ..BenchOptions::default()
    };
    print!("{}", render_bench(&cmd_bench(&opts)?));
    Ok(())
}
