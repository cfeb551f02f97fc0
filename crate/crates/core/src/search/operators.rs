//! Variation and selection operators over integer genes in `[0, domain_size)`.
//!
//! Crossover and mutation act on the real relaxation of each gene using the
//! bounded forms of simulated binary crossover and polynomial mutation, then
//! round half away from zero and clamp back into the domain.

use rand::Rng;

use super::Individual;

const EPS: f64 = 1e-14;

/// Picks two distinct members uniformly and returns the fitter one; ties
/// are broken uniformly at random. Unevaluated members count as fitness 0.
pub fn binary_tournament<'a, R: Rng + ?Sized>(population: &'a [Individual], rng: &mut R) -> &'a Individual {
    assert!(population.len() >= 2, "tournament needs at least two individuals");
    let a = rng.random_range(0..population.len());
    let mut b = rng.random_range(0..population.len() - 1);
    if b >= a {
        b += 1;
    }
    let (fa, fb) = (population[a].fitness.unwrap_or(0), population[b].fitness.unwrap_or(0));
    let winner = match fa.cmp(&fb) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if rng.random_bool(0.5) {
                a
            } else {
                b
            }
        }
    };
    &population[winner]
}

/// Integer simulated binary crossover.
///
/// With probability `1 - rate` the parents are returned unchanged. Otherwise
/// each gene pair takes part with probability 0.5; a participating pair is
/// spread with distribution index `eta` and the two children are assigned to
/// the offspring in random order.
pub fn sbx_crossover<R: Rng + ?Sized>(
    parent1: &[usize],
    parent2: &[usize],
    domain_size: usize,
    rate: f64,
    eta: f64,
    rng: &mut R,
) -> (Vec<usize>, Vec<usize>) {
    assert_eq!(parent1.len(), parent2.len(), "parents differ in length");
    let mut child1 = parent1.to_vec();
    let mut child2 = parent2.to_vec();
    if domain_size <= 1 || rng.random::<f64>() >= rate {
        return (child1, child2);
    }
    let (lower, upper) = (0.0, (domain_size - 1) as f64);
    for i in 0..parent1.len() {
        if rng.random::<f64>() > 0.5 {
            continue;
        }
        let (x1, x2) = (parent1[i] as f64, parent2[i] as f64);
        if (x1 - x2).abs() <= EPS {
            continue;
        }
        let (y1, y2) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
        let u = rng.random::<f64>();
        let exponent = 1.0 / (eta + 1.0);
        let spread = |beta: f64| {
            let alpha = 2.0 - beta.powf(-(eta + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(exponent)
            } else {
                (1.0 / (2.0 - u * alpha)).powf(exponent)
            }
        };
        let betaq = spread(1.0 + 2.0 * (y1 - lower) / (y2 - y1));
        let c1 = 0.5 * (y1 + y2 - betaq * (y2 - y1));
        let betaq = spread(1.0 + 2.0 * (upper - y2) / (y2 - y1));
        let c2 = 0.5 * (y1 + y2 + betaq * (y2 - y1));
        let (c1, c2) = (to_gene(c1, domain_size), to_gene(c2, domain_size));
        if rng.random::<f64>() <= 0.5 {
            child1[i] = c2;
            child2[i] = c1;
        } else {
            child1[i] = c1;
            child2[i] = c2;
        }
    }
    (child1, child2)
}

/// Integer polynomial mutation in place. Each gene is perturbed with
/// probability `rate`; returns how many genes were selected for mutation
/// (a selected gene may round back to its old value).
pub fn polynomial_mutation<R: Rng + ?Sized>(
    genes: &mut [usize],
    domain_size: usize,
    rate: f64,
    eta: f64,
    rng: &mut R,
) -> usize {
    let mut applied = 0;
    let (lower, upper) = (0.0, domain_size.saturating_sub(1) as f64);
    for gene in genes.iter_mut() {
        if rng.random::<f64>() >= rate {
            continue;
        }
        applied += 1;
        if upper <= lower {
            *gene = 0;
            continue;
        }
        let y = *gene as f64;
        let delta1 = (y - lower) / (upper - lower);
        let delta2 = (upper - y) / (upper - lower);
        let u = rng.random::<f64>();
        let exponent = 1.0 / (eta + 1.0);
        let deltaq = if u < 0.5 {
            let xy = 1.0 - delta1;
            let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(eta + 1.0);
            val.powf(exponent) - 1.0
        } else {
            let xy = 1.0 - delta2;
            let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(eta + 1.0);
            1.0 - val.powf(exponent)
        };
        *gene = to_gene(y + deltaq * (upper - lower), domain_size);
    }
    applied
}

/// Round half away from zero, then clamp to `[0, domain_size - 1]`.
fn to_gene(x: f64, domain_size: usize) -> usize {
    let upper = domain_size.saturating_sub(1) as f64;
    x.round().clamp(0.0, upper) as usize
}
