//! Test oracles for one executed test.
//!
//! A test runs the program `100 × |expected outputs|` times on one input.
//! It fails with an *unexpected output* (uof) when any observed output has
//! specified probability zero. Only when no such output was seen is the
//! output frequency compared against the specified distribution with a
//! Pearson chi-square goodness-of-fit test; a significant difference is a
//! *wrong output distribution* failure (wodf).

mod chi2;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spec::{expected_outputs, ProgramSpec, SpecError};

pub use chi2::{chi_square_pvalue, ln_gamma, regularized_gamma_q};

/// Runs per expected output.
pub const REPETITIONS_PER_OUTPUT: usize = 100;

pub const DEFAULT_ALPHA: f64 = 0.01;

#[derive(Debug, Error, PartialEq)]
pub enum AssessError {
    #[error(transparent)]
    Spec(#[from] SpecError),

    #[error("chi-square statistic must be finite and non-negative, got {0}")]
    InvalidStatistic(f64),

    #[error("chi-square test needs at least one degree of freedom")]
    ZeroDegreesOfFreedom,

    #[error("input `{input}` requires {expected} repetitions but {actual} outputs were observed")]
    CountMismatch {
        input: String,
        expected: usize,
        actual: usize,
    },

    #[error("distribution check on input `{input}` saw unexpected output `{output}`; the uof check must run first")]
    UofNotChecked { input: String, output: String },
}

/// Outcome of running and assessing one test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestExecution {
    pub input: String,
    pub repetitions: usize,
    pub observed: BTreeMap<String, usize>,
    pub uof: bool,
    pub wodf: bool,
    /// Present iff the chi-square test was performed.
    pub p_value: Option<f64>,
    pub statistic: Option<f64>,
    pub failed: bool,
}

/// Number of runs for `input`: `100 × |expected outputs|`.
pub fn repetitions(spec: &ProgramSpec, input: &str) -> Result<usize, AssessError> {
    Ok(REPETITIONS_PER_OUTPUT * spec.row(input)?.len())
}

/// True iff some output with a nonzero count is not expected for `input`.
pub fn check_uof(spec: &ProgramSpec, input: &str, observed: &BTreeMap<String, usize>) -> Result<bool, AssessError> {
    let row = spec.row(input)?;
    Ok(observed
        .iter()
        .any(|(output, &count)| count > 0 && !row.contains_key(output)))
}

/// Pearson goodness-of-fit of `observed` against the specified row.
///
/// Returns `(wodf, p_value)`. Expected outputs that were never observed
/// contribute `exp_h` to the statistic. A row with a single expected output
/// has no degrees of freedom; it returns `(false, None)` and is policed by
/// the uof check alone.
pub fn check_wodf(
    spec: &ProgramSpec,
    input: &str,
    observed: &BTreeMap<String, usize>,
    alpha: f64,
) -> Result<(bool, Option<f64>), AssessError> {
    let (wodf, p, _) = goodness_of_fit(spec, input, observed, alpha)?;
    Ok((wodf, p))
}

fn goodness_of_fit(
    spec: &ProgramSpec,
    input: &str,
    observed: &BTreeMap<String, usize>,
    alpha: f64,
) -> Result<(bool, Option<f64>, Option<f64>), AssessError> {
    let row = spec.row(input)?;
    if let Some((output, _)) = observed.iter().find(|(o, &c)| c > 0 && !row.contains_key(*o)) {
        return Err(AssessError::UofNotChecked {
            input: input.to_string(),
            output: output.clone(),
        });
    }
    let df = row.len() - 1;
    if df == 0 {
        return Ok((false, None, None));
    }
    let n: usize = observed.values().sum();
    let n = n as f64;
    let statistic: f64 = row
        .iter()
        .map(|(output, &p)| {
            let expected = p * n;
            let obs = observed.get(output).copied().unwrap_or(0) as f64;
            (obs - expected).powi(2) / expected
        })
        .sum();
    let p_value = chi_square_pvalue(statistic, df)?;
    Ok((p_value < alpha, Some(p_value), Some(statistic)))
}

/// Full verdict for one test: uof first, and wodf only if uof did not fire.
pub fn assess(
    spec: &ProgramSpec,
    input: &str,
    observed: &BTreeMap<String, usize>,
    alpha: f64,
) -> Result<TestExecution, AssessError> {
    let expected = repetitions(spec, input)?;
    let actual: usize = observed.values().sum();
    if actual != expected {
        return Err(AssessError::CountMismatch {
            input: input.to_string(),
            expected,
            actual,
        });
    }
    let observed: BTreeMap<String, usize> = observed
        .iter()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| (k.clone(), c))
        .collect();
    let mut execution = TestExecution {
        input: input.to_string(),
        repetitions: expected,
        observed,
        uof: false,
        wodf: false,
        p_value: None,
        statistic: None,
        failed: false,
    };
    if check_uof(spec, input, &execution.observed)? {
        execution.uof = true;
        execution.failed = true;
        return Ok(execution);
    }
    let (wodf, p_value, statistic) = goodness_of_fit(spec, input, &execution.observed, alpha)?;
    execution.wodf = wodf;
    execution.p_value = p_value;
    execution.statistic = statistic;
    execution.failed = wodf;
    Ok(execution)
}

/// Expected count of each specified output for `input` over `n` runs.
pub fn expected_counts(spec: &ProgramSpec, input: &str, n: usize) -> Result<BTreeMap<String, f64>, AssessError> {
    Ok(expected_outputs(spec, input)?
        .into_iter()
        .map(|o| (o.to_string(), spec.probability(input, o).unwrap_or(0.0) * n as f64))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;

    fn counts(pairs: &[(&str, usize)]) -> BTreeMap<String, usize> {
        pairs.iter().map(|(k, c)| (k.to_string(), *c)).collect()
    }

    fn swap_spec() -> ProgramSpec {
        parse_spec(
            r#"{"00":{"1":1.0},"01":{"0":0.5,"1":0.5},"10":{"0":0.5,"1":0.5},"11":{"1":1.0}}"#,
            2,
            1,
        )
        .unwrap()
    }

    #[test]
    fn repetition_formula() {
        let ps = swap_spec();
        assert_eq!(repetitions(&ps, "00").unwrap(), 100);
        assert_eq!(repetitions(&ps, "01").unwrap(), 200);
        let uniform = parse_spec(r#"{"0":{"00":0.25,"01":0.25,"10":0.25,"11":0.25}}"#, 1, 2).unwrap();
        assert_eq!(repetitions(&uniform, "0").unwrap(), 400);
        assert!(matches!(
            repetitions(&ps, "2"),
            Err(AssessError::Spec(SpecError::UnknownInput(_)))
        ));
    }

    #[test]
    fn uof_examples() {
        let ps = swap_spec();
        assert!(!check_uof(&ps, "00", &counts(&[("1", 100)])).unwrap());
        assert!(check_uof(&ps, "00", &counts(&[("1", 99), ("0", 1)])).unwrap());
        assert!(!check_uof(&ps, "01", &counts(&[("0", 40), ("1", 160)])).unwrap());
        // zero counts do not count as observed
        assert!(!check_uof(&ps, "00", &counts(&[("1", 100), ("0", 0)])).unwrap());
    }

    #[test]
    fn wodf_examples() {
        let ps = swap_spec();
        let fair = parse_spec(r#"{"0":{"0":0.5,"1":0.5}}"#, 1, 1).unwrap();
        let (flag, p) = check_wodf(&fair, "0", &counts(&[("0", 45), ("1", 55)]), 0.01).unwrap();
        assert!(!flag);
        assert!((p.unwrap() - 0.3173105078629141).abs() < 1e-9);

        assert_eq!(
            check_wodf(&ps, "00", &counts(&[("1", 100)]), 0.01).unwrap(),
            (false, None)
        );

        let (flag, p) = check_wodf(&ps, "01", &counts(&[("0", 5), ("1", 195)]), 0.01).unwrap();
        assert!(flag);
        assert!(p.unwrap() < 1e-15);

        assert!(matches!(
            check_wodf(&ps, "00", &counts(&[("0", 1), ("1", 99)]), 0.01),
            Err(AssessError::UofNotChecked { .. })
        ));
    }

    #[test]
    fn unobserved_category_contributes() {
        let ps = swap_spec();
        let e = assess(&ps, "01", &counts(&[("1", 200)]), 0.01).unwrap();
        assert_eq!(e.statistic, Some(200.0));
        assert!(e.wodf && e.failed && !e.uof);
    }

    #[test]
    fn assess_order_and_flags() {
        let ps = swap_spec();
        let e = assess(&ps, "00", &counts(&[("0", 1), ("1", 99)]), 0.01).unwrap();
        assert!(e.uof && e.failed && !e.wodf && e.p_value.is_none());

        let e = assess(&ps, "01", &counts(&[("0", 101), ("1", 99)]), 0.01).unwrap();
        assert!(!e.failed);
        assert!((e.statistic.unwrap() - 0.02).abs() < 1e-12);
        assert!((e.p_value.unwrap() - 0.887537083981715).abs() < 1e-9);

        let e = assess(&ps, "01", &counts(&[("0", 5), ("1", 195)]), 0.01).unwrap();
        assert!((e.statistic.unwrap() - 180.5).abs() < 1e-12);
        assert!(e.failed && e.wodf && !e.uof);

        assert!(matches!(
            assess(&ps, "01", &counts(&[("0", 5)]), 0.01),
            Err(AssessError::CountMismatch {
                expected: 200,
                actual: 5,
                ..
            })
        ));
    }

    #[test]
    fn expected_counts_scale_with_n() {
        let ps = swap_spec();
        assert_eq!(
            expected_counts(&ps, "01", 200).unwrap(),
            BTreeMap::from([("0".to_string(), 100.0), ("1".to_string(), 100.0)])
        );
    }
}
