//! Generate a suite for a program whose fault is close to the detection
//! threshold, then replay it with the recorded seeds and with fresh ones.
//! Recorded replays reproduce every verdict; fresh ones may flip some.
//!
//! cargo run --example replay_suite

use qsearch::cli::{cmd_generate, cmd_replay, RunConfig, SeedMode};
use qsearch::corpus::{SWAP_BORDERLINE, SWAP_TEST};
use qsearch::search::SuiteSize;

fn main() -> qsearch::Result<()> {
    let dir = std::env::temp_dir().join("qsearch-replay-example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let circuit = dir.join("borderline.qasm");
    let spec = dir.join("spec.json");
    std::fs::write(&circuit, SWAP_BORDERLINE).expect("write circuit");
    // only the unequal inputs, whose distribution is the borderline part
    std::fs::write(&spec, r#"{"01":{"0":0.5,"1":0.5},"10":{"0":0.5,"1":0.5}}"#).expect("write spec");

    let mut cfg = RunConfig::new(&circuit, &spec, SWAP_TEST.roles());
    cfg.search.suite_size = SuiteSize::Absolute(8);
    cfg.search.master_seed = 3;
    cfg.output_dir = dir.clone();
    cfg.strict_domain = false;
    let out = cmd_generate(&cfg)?;
    println!(
        "generated: {} of {} tests fail\n",
        out.manifest.summary.failing, out.manifest.summary.suite_size
    );

    print!(
        "{}",
        cmd_replay(&out.manifest_path, None, None, SeedMode::Recorded)?.render()
    );
    for seed in 1..=3 {
        println!();
        print!(
            "{}",
            cmd_replay(&out.manifest_path, None, None, SeedMode::Fresh(seed))?.render()
        );
    }
    Ok(())
}
