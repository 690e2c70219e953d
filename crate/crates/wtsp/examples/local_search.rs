//! Randomized local search with the three mutation operators on one
//! instance, with improvement traces.
//!
//! ```bash
//! cargo run -p wtsp --example local_search
//! ```

use wtsp::exact::held_karp_wtsp;
use wtsp::heuristics::{default_budget, perf, rls, Fitness, MutationKind, RlsConfig};
use wtsp::instances::{generate_instance, GeneratorSpec, PlacementKind, WeightClass, WeightConfig};

fn main() {
    let spec = GeneratorSpec {
        n: 14,
        placement: PlacementKind::Rue,
        weight_config: WeightConfig::new(WeightClass::C3, 5.0).unwrap(),
        placement_seed: 11,
        weight_seed: 12,
    };
    let instance = generate_instance(&spec).unwrap();
    let optimum = held_karp_wtsp(&instance).unwrap().cost;
    println!("instance {} (n = {}), exact optimum W = {optimum:.3}", instance.name(), instance.n());

    for mutation in MutationKind::ALL {
        let mut config =
            RlsConfig::new(mutation, Fitness::Weighted, default_budget(instance.n()), 4);
        config.record_trace = true;
        let result = rls(&instance, &config).unwrap();
        let deviation = perf(result.best_cost, optimum).unwrap();
        println!(
            "{:<9} final W = {:>10.3}  perf = {:>6.2}%  improvements = {}",
            mutation.name(),
            result.best_cost,
            deviation,
            result.trace.as_ref().map_or(0, Vec::len)
        );
        if mutation == MutationKind::Inversion {
            for (eval, cost) in result.trace.unwrap().iter().take(5) {
                println!("    evaluation {eval:>5}: W = {cost:.3}");
            }
            println!("    ...");
        }
    }
}
