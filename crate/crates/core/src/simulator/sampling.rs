use std::collections::BTreeMap;

use rand::Rng;

use super::OutputDistribution;
use crate::rng;

/// Draws `n` shots from `dist` and returns how often each output occurred.
///
/// Outcomes are selected by inverse-CDF lookup over the distribution's keys
/// in sorted order, using a ChaCha8 stream keyed by `seed`, so identical
/// `(dist, n, seed)` always give identical counts. Only outputs that were
/// drawn at least once appear in the result.
pub fn sample_outputs(dist: &OutputDistribution, n: usize, seed: u64) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    let entries: Vec<(&String, f64)> = dist.probs().iter().map(|(k, &p)| (k, p)).collect();
    if entries.is_empty() || n == 0 {
        return counts;
    }
    let mut cumulative = Vec::with_capacity(entries.len());
    let mut acc = 0.0;
    for (_, p) in &entries {
        acc += p;
        cumulative.push(acc);
    }
    // Scale by the actual total so pruning dust cannot leave a gap at the top.
    let total = acc;
    let mut tally = vec![0usize; entries.len()];
    let mut rng = rng::seeded(seed);
    for _ in 0..n {
        let u = rng.random::<f64>() * total;
        let k = cumulative.partition_point(|&c| c <= u).min(entries.len() - 1);
        tally[k] += 1;
    }
    for ((key, _), count) in entries.into_iter().zip(tally) {
        if count > 0 {
            counts.insert(key.clone(), count);
        }
    }
    counts
}
