//! Selection, crossover and mutation on integer suites.
//!
//! cargo run --example genetic_operators

use qsearch::rng::seeded;
use qsearch::search::{binary_tournament, polynomial_mutation, sbx_crossover, Individual};

fn main() {
    let mut rng = seeded(2024);
    let domain = 1024;

    let p1 = vec![3, 100, 512, 900, 1023];
    let p2 = vec![40, 90, 700, 10, 1000];
    for _ in 0..3 {
        let (c1, c2) = sbx_crossover(&p1, &p2, domain, 0.9, 20.0, &mut rng);
        println!("sbx      {c1:?} {c2:?}");
    }

    let mut genes = p1.clone();
    let applied = polynomial_mutation(&mut genes, domain, 0.4, 20.0, &mut rng);
    println!("mutation {p1:?} -> {genes:?} ({applied} genes selected)");

    let population: Vec<Individual> = [2, 5, 5, 1]
        .into_iter()
        .map(|f| Individual {
            fitness: Some(f),
            ..Individual::unevaluated(vec![f])
        })
        .collect();
    let winners: Vec<_> = (0..12)
        .map(|_| binary_tournament(&population, &mut rng).fitness.unwrap())
        .collect();
    println!("tournament winners by fitness: {winners:?}");
}
