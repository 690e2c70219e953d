//! Bounded integer weights via city duplication: expand, solve the
//! unit-weight expansion, collapse back, and compare with the exact
//! optimum.
//!
//! ```bash
//! cargo run -p wtsp --example bounded_weights
//! ```

use wtsp::approx::{
    approximate_bounded_weights, block_substitute, collapse_tour, expand_weights, KTourMode,
    SweepParams, TspMode,
};
use wtsp::core::{weighted_cost, Instance, Tour};
use wtsp::exact::held_karp_wtsp;

fn main() {
    let instance = Instance::euclidean(
        "grid",
        vec![(0.0, 0.0), (400.0, 0.0), (400.0, 300.0), (0.0, 300.0), (200.0, 150.0), (700.0, 150.0)],
        vec![1.0, 3.0, 1.0, 2.0, 1.0, 2.0],
    )
    .unwrap();

    let (expanded, map) = expand_weights(&instance).unwrap();
    println!(
        "expanded {} cities into {} unit-weight copies",
        instance.n(),
        expanded.n()
    );

    // translating any original tour leaves the cost untouched
    let tour = Tour::new(vec![0, 4, 1, 5, 2, 3]).unwrap();
    let substituted = block_substitute(&tour, &map).unwrap();
    println!(
        "block substitution: original W = {:.1}, expanded W = {:.1}",
        weighted_cost(&instance, &tour).unwrap(),
        weighted_cost(&expanded, &substituted).unwrap()
    );

    // collapsing an interleaved expanded tour never increases the cost
    let interleaved = Tour::new(vec![0, 1, 6, 2, 7, 3, 4, 5, 8, 9]).unwrap();
    let collapsed = collapse_tour(&interleaved, &map, &instance).unwrap();
    println!(
        "collapse: expanded W = {:.1} -> original W = {:.1} via {collapsed}",
        weighted_cost(&expanded, &interleaved).unwrap(),
        weighted_cost(&instance, &collapsed).unwrap()
    );

    // the full pipeline against the exact optimum
    let approx = approximate_bounded_weights(
        &instance,
        KTourMode::Exact,
        TspMode::Christofides,
        &SweepParams::default(),
    )
    .unwrap();
    let got = weighted_cost(&instance, &approx).unwrap();
    let opt = held_karp_wtsp(&instance).unwrap();
    println!("pipeline tour {approx}: W = {got:.1}");
    println!("exact optimum {}: W = {:.1} (ratio {:.4})", opt.tour, opt.cost, got / opt.cost);
}
