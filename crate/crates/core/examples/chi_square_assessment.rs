//! The two test oracles on hand-made observations.
//!
//! cargo run --example chi_square_assessment

use std::collections::BTreeMap;

use qsearch::assess::{assess, chi_square_pvalue, repetitions, DEFAULT_ALPHA};
use qsearch::spec::parse_spec;

fn counts(pairs: &[(&str, usize)]) -> BTreeMap<String, usize> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn main() -> qsearch::Result<()> {
    let spec = parse_spec(
        r#"{"00":{"1":1.0},"01":{"0":0.5,"1":0.5},"10":{"0":0.5,"1":0.5},"11":{"1":1.0}}"#,
        2,
        1,
    )?;

    println!(
        "runs per test: 00 -> {}, 01 -> {}",
        repetitions(&spec, "00")?,
        repetitions(&spec, "01")?
    );

    let cases = [
        ("00", counts(&[("1", 100)])),
        ("00", counts(&[("1", 99), ("0", 1)])),
        ("01", counts(&[("0", 101), ("1", 99)])),
        ("01", counts(&[("0", 80), ("1", 120)])),
        ("01", counts(&[("0", 5), ("1", 195)])),
    ];
    for (input, observed) in &cases {
        let e = assess(&spec, input, observed, DEFAULT_ALPHA)?;
        println!(
            "{input} {:?}: uof={} wodf={} statistic={:?} p={:?}",
            observed, e.uof, e.wodf, e.statistic, e.p_value
        );
    }

    println!("\nupper-tail p-values:");
    for (x, df) in [(3.841458820694124, 1), (9.21034037197618, 2), (11.344866730144373, 3)] {
        println!("  chi2({df}) >= {x:.4}: {:.6}", chi_square_pvalue(x, df)?);
    }
    Ok(())
}
