//! Genetic search for a test suite with as many failing tests as possible.
//!
//! An individual is a vector of `M` gene indices into the search domain
//! (the inputs listed in the specification). Evaluating it runs each test,
//! assesses it, and counts the failures; that count is the fitness.

pub mod operators;

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assess::{self, TestExecution, DEFAULT_ALPHA};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::rng;
use crate::simulator::{sample_outputs, OutputDistribution, SimulationError, Simulator};
use crate::spec::ProgramSpec;

pub use operators::{binary_tournament, polynomial_mutation, sbx_crossover};

/// Stream tag for the generator that drives selection and variation.
const GA_STREAM: u64 = 0x4741;

/// How the number of tests per suite is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteSize {
    /// A fixed `M`.
    Absolute(usize),
    /// `M = ⌈β · |domain|⌉`.
    Percentage(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub suite_size: SuiteSize,
    pub population_size: usize,
    pub max_generations: usize,
    pub crossover_rate: f64,
    pub crossover_distribution_index: f64,
    /// `None` means `1/M`.
    pub mutation_rate: Option<f64>,
    pub mutation_distribution_index: f64,
    pub alpha: f64,
    pub master_seed: u64,
    pub elitism: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            suite_size: SuiteSize::Percentage(0.05),
            population_size: 10,
            max_generations: 50,
            crossover_rate: 0.9,
            crossover_distribution_index: 20.0,
            mutation_rate: None,
            mutation_distribution_index: 20.0,
            alpha: DEFAULT_ALPHA,
            master_seed: 0,
            elitism: 1,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        match self.suite_size {
            SuiteSize::Absolute(0) => return bad("suite_size must be at least 1".into()),
            SuiteSize::Percentage(b) if !(b > 0.0 && b <= 1.0) => {
                return bad(format!("suite_percentage must be in (0, 1], got {b}"))
            }
            _ => {}
        }
        if self.population_size < 2 {
            return bad(format!(
                "population_size must be at least 2, got {}",
                self.population_size
            ));
        }
        if self.max_generations < 1 {
            return bad("max_generations must be at least 1".into());
        }
        let probability = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be in [0, 1], got {p}")))
            }
        };
        probability("crossover_rate", self.crossover_rate)?;
        if let Some(rate) = self.mutation_rate {
            probability("mutation_rate", rate)?;
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must be in (0, 1), got {}", self.alpha));
        }
        for (name, eta) in [
            ("crossover_distribution_index", self.crossover_distribution_index),
            ("mutation_distribution_index", self.mutation_distribution_index),
        ] {
            if !(eta.is_finite() && eta >= 0.0) {
                return bad(format!("{name} must be finite and non-negative, got {eta}"));
            }
        }
        // Without an elite the best-ever suite could be lost between generations.
        if self.elitism < 1 || self.elitism >= self.population_size {
            return bad(format!(
                "elitism must be in [1, population_size), got {} with population_size {}",
                self.elitism, self.population_size
            ));
        }
        Ok(())
    }

    /// Per-gene mutation probability for suites of `m` tests.
    pub fn mutation_rate_for(&self, m: usize) -> f64 {
        self.mutation_rate.unwrap_or(1.0 / m.max(1) as f64)
    }
}

/// Tests per suite for a search domain of `domain_size` inputs (at least 1).
pub fn suite_size(cfg: &SearchConfig, domain_size: usize) -> usize {
    let m = match cfg.suite_size {
        SuiteSize::Absolute(m) => m,
        SuiteSize::Percentage(beta) => (beta * domain_size as f64).ceil() as usize,
    };
    m.max(1)
}

/// One executed test together with the seed that drove its sampling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestRun {
    pub seed: u64,
    pub execution: TestExecution,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub genes: Vec<usize>,
    pub fitness: Option<usize>,
    pub executions: Vec<TestRun>,
}

impl Individual {
    pub fn unevaluated(genes: Vec<usize>) -> Self {
        Individual {
            genes,
            fitness: None,
            executions: Vec::new(),
        }
    }

    pub fn failing(&self) -> usize {
        self.executions.iter().filter(|r| r.execution.failed).count()
    }

    /// Genes that occur more than once, with their multiplicity.
    pub fn duplicates(&self) -> BTreeMap<usize, usize> {
        let mut seen = BTreeMap::new();
        for &g in &self.genes {
            *seen.entry(g).or_insert(0usize) += 1;
        }
        seen.retain(|_, n| *n > 1);
        seen
    }
}

/// Fitness statistics after one generation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    /// Best fitness seen in any generation so far.
    pub best_ever: usize,
    pub best: usize,
    pub mean: f64,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub best: Individual,
    pub history: Vec<GenerationStats>,
    pub suite_size: usize,
    pub domain: Vec<String>,
    pub evaluations: usize,
    /// Wall-clock time spent evaluating suites (simulation, sampling, assessment).
    pub simulation_time: Duration,
    /// Wall-clock time of the whole search.
    pub search_time: Duration,
    pub notes: Vec<String>,
}

impl SearchReport {
    pub fn failing(&self) -> usize {
        self.best.failing()
    }

    pub fn failing_fraction(&self) -> f64 {
        self.failing() as f64 / self.suite_size as f64
    }
}

/// Runs one test: exact distribution, seeded sampling, assessment.
pub fn execute_test(
    dist: &OutputDistribution,
    spec: &ProgramSpec,
    input: &str,
    seed: u64,
    alpha: f64,
) -> Result<TestExecution> {
    let n = assess::repetitions(spec, input)?;
    let observed = sample_outputs(dist, n, seed);
    Ok(assess::assess(spec, input, &observed, alpha)?)
}

/// Everything `evaluate` needs, plus a cache of exact output distributions.
///
/// Simulation is deterministic given circuit and input, so each input is
/// simulated at most once per context. Sampling stays fresh per test.
pub struct SearchContext<'a> {
    circuit: &'a Circuit,
    spec: &'a ProgramSpec,
    config: SearchConfig,
    domain: Vec<String>,
    suite_size: usize,
    simulator: Simulator,
    cache: Vec<OnceLock<std::result::Result<OutputDistribution, SimulationError>>>,
    notes: Vec<String>,
}

impl<'a> SearchContext<'a> {
    pub fn new(circuit: &'a Circuit, spec: &'a ProgramSpec, config: SearchConfig, strict_domain: bool) -> Result<Self> {
        Self::with_simulator(circuit, spec, config, strict_domain, Simulator::default())
    }

    pub fn with_simulator(
        circuit: &'a Circuit,
        spec: &'a ProgramSpec,
        config: SearchConfig,
        strict_domain: bool,
        simulator: Simulator,
    ) -> Result<Self> {
        config.validate()?;
        if spec.input_width() != circuit.input_qubits().len() || spec.output_width() != circuit.output_qubits().len() {
            return Err(Error::Config(format!(
                "specification is for {} input / {} output qubits but the circuit declares {} / {}",
                spec.input_width(),
                spec.output_width(),
                circuit.input_qubits().len(),
                circuit.output_qubits().len()
            )));
        }
        let domain = spec.search_domain(strict_domain)?;
        let suite_size = suite_size(&config, domain.len());
        let mut notes = Vec::new();
        let full = circuit.input_domain_size();
        if domain.len() < full {
            notes.push(format!(
                "search domain restricted to the {} inputs listed in the specification (of {full})",
                domain.len()
            ));
        }
        if suite_size > domain.len() {
            notes.push(format!(
                "suite size {suite_size} exceeds the search domain ({}); suites will contain duplicates",
                domain.len()
            ));
        }
        let cache = (0..domain.len()).map(|_| OnceLock::new()).collect();
        Ok(SearchContext {
            circuit,
            spec,
            config,
            domain,
            suite_size,
            simulator,
            cache,
            notes,
        })
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn suite_size(&self) -> usize {
        self.suite_size
    }

    pub fn circuit(&self) -> &Circuit {
        self.circuit
    }

    pub fn spec(&self) -> &ProgramSpec {
        self.spec
    }

    pub fn distribution(&self, gene: usize) -> Result<&OutputDistribution> {
        let slot = self
            .cache
            .get(gene)
            .ok_or_else(|| Error::Internal(format!("gene {gene} outside search domain of {}", self.domain.len())))?;
        slot.get_or_init(|| self.simulator.distribution(self.circuit, &self.domain[gene]))
            .as_ref()
            .map_err(|e| Error::Simulation(e.clone()))
    }

    /// Runs and assesses every test of `genes`; fitness is the failure count.
    pub fn evaluate(&self, genes: Vec<usize>, generation: usize, individual: usize) -> Result<Individual> {
        if genes.len() != self.suite_size {
            return Err(Error::Internal(format!(
                "individual has {} genes, expected {}",
                genes.len(),
                self.suite_size
            )));
        }
        let master = self.config.master_seed;
        let executions = genes
            .par_iter()
            .enumerate()
            .map(|(j, &gene)| {
                let dist = self.distribution(gene)?;
                let seed = rng::test_seed(master, generation as u64, individual as u64, j as u64);
                let execution = execute_test(dist, self.spec, &self.domain[gene], seed, self.config.alpha)?;
                Ok(TestRun { seed, execution })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut ind = Individual {
            genes,
            fitness: None,
            executions,
        };
        ind.fitness = Some(ind.failing());
        Ok(ind)
    }
}

fn fitness(ind: &Individual) -> usize {
    ind.fitness.unwrap_or(0)
}

/// Generational GA with elitism. Returns the best individual ever evaluated.
pub fn run_search(ctx: &SearchContext) -> Result<SearchReport> {
    let started = Instant::now();
    let cfg = ctx.config();
    let m = ctx.suite_size();
    let domain_size = ctx.domain().len();
    let mutation_rate = cfg.mutation_rate_for(m);
    let mut ga = rng::seeded(rng::combine(&[cfg.master_seed, GA_STREAM]));
    let mut simulation_time = Duration::ZERO;
    let mut evaluations = 0usize;

    let mut evaluate = |genes: Vec<usize>, generation: usize, index: usize| {
        let t = Instant::now();
        let ind = ctx.evaluate(genes, generation, index);
        simulation_time += t.elapsed();
        evaluations += 1;
        ind
    };

    let mut population = Vec::with_capacity(cfg.population_size);
    for i in 0..cfg.population_size {
        let genes: Vec<usize> = (0..m).map(|_| ga.random_range(0..domain_size)).collect();
        population.push(evaluate(genes, 0, i)?);
    }

    let mut best = best_of(&population).clone();
    let mut history = vec![stats(0, &population, fitness(&best))];

    for generation in 1..cfg.max_generations {
        let mut order: Vec<usize> = (0..population.len()).collect();
        // stable: among equals the earlier individual wins
        order.sort_by_key(|&i| std::cmp::Reverse(fitness(&population[i])));
        let mut next: Vec<Individual> = order[..cfg.elitism].iter().map(|&i| population[i].clone()).collect();

        while next.len() < cfg.population_size {
            let p1 = binary_tournament(&population, &mut ga).genes.clone();
            let p2 = binary_tournament(&population, &mut ga).genes.clone();
            let (mut c1, mut c2) = sbx_crossover(
                &p1,
                &p2,
                domain_size,
                cfg.crossover_rate,
                cfg.crossover_distribution_index,
                &mut ga,
            );
            for child in [&mut c1, &mut c2] {
                polynomial_mutation(
                    child,
                    domain_size,
                    mutation_rate,
                    cfg.mutation_distribution_index,
                    &mut ga,
                );
            }
            for child in [c1, c2] {
                if next.len() < cfg.population_size {
                    let index = next.len();
                    next.push(evaluate(child, generation, index)?);
                }
            }
        }
        population = next;

        let current = best_of(&population);
        if fitness(current) > fitness(&best) {
            best = current.clone();
        }
        history.push(stats(generation, &population, fitness(&best)));
    }

    Ok(SearchReport {
        best,
        history,
        suite_size: m,
        domain: ctx.domain().to_vec(),
        evaluations,
        simulation_time,
        search_time: started.elapsed(),
        notes: ctx.notes.clone(),
    })
}

/// First individual with maximal fitness.
fn best_of(population: &[Individual]) -> &Individual {
    let top = population.iter().map(fitness).max().unwrap_or(0);
    population
        .iter()
        .find(|i| fitness(i) == top)
        .expect("non-empty population")
}

fn stats(generation: usize, population: &[Individual], best_ever: usize) -> GenerationStats {
    let total: usize = population.iter().map(fitness).sum();
    GenerationStats {
        generation,
        best_ever,
        best: population.iter().map(fitness).max().unwrap_or(0),
        mean: total as f64 / population.len() as f64,
    }
}
