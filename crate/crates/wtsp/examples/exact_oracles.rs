//! Exact solvers on one random instance: full enumeration against the
//! subset DP, plus the classical TSP and minimum latency optima.
//!
//! ```bash
//! cargo run -p wtsp --example exact_oracles
//! ```

use wtsp::exact::{brute_force_wtsp, exact_mlp, exact_tsp, held_karp_wtsp};
use wtsp::instances::{generate_instance, GeneratorSpec, PlacementKind, WeightClass, WeightConfig};

fn main() {
    let spec = GeneratorSpec {
        n: 9,
        placement: PlacementKind::Rue,
        weight_config: WeightConfig::new(WeightClass::C2, 4.0).unwrap(),
        placement_seed: 2,
        weight_seed: 3,
    };
    let instance = generate_instance(&spec).unwrap();
    println!("instance {} with weights {:?}", instance.name(), instance.weights());

    let brute = brute_force_wtsp(&instance).unwrap();
    let dp = held_karp_wtsp(&instance).unwrap();
    println!(
        "brute force: W = {:.3} over {} permutations, tour {}",
        brute.cost, brute.nodes_expanded, brute.tour
    );
    println!("subset DP:   W = {:.3} over {} states, tour {}", dp.cost, dp.nodes_expanded, dp.tour);
    assert!((brute.cost - dp.cost).abs() < 1e-9);

    let tsp = exact_tsp(&instance).unwrap();
    let mlp = exact_mlp(&instance).unwrap();
    println!("classical TSP optimum: {:.3} via {}", tsp.cost, tsp.tour);
    println!("minimum latency path:  {:.3} via {}", mlp.cost, mlp.tour);
    println!("latency lower-bounds the unit-weight optimum: {}", mlp.cost <= dp.cost);
}
