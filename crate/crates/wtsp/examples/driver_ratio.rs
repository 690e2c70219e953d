//! Driver-ratio protocol: the same local search once under the classical
//! TSP fitness and once under the weighted fitness, both final tours
//! judged by the weighted cost. Clustered instances amplify the gap.
//!
//! ```bash
//! cargo run -p wtsp --example driver_ratio
//! ```

use wtsp::harness::{
    driver_ratio_protocol_in_memory, oracle_ratio, summarize_ratios, BudgetSpec, ExperimentSpec,
};
use wtsp::instances::io::InstanceMeta;
use wtsp::instances::{generate_instance, GeneratorSpec, PlacementKind, WeightClass, WeightConfig};

fn main() {
    let mut all_rows = Vec::new();
    for placement in [PlacementKind::Rue, PlacementKind::Netgen] {
        let instances: Vec<_> = (1..=5u64)
            .map(|rep| {
                let spec = GeneratorSpec {
                    n: 200,
                    placement,
                    weight_config: WeightConfig::new(WeightClass::C2, 5.0).unwrap(),
                    placement_seed: 60 + rep,
                    weight_seed: 70 + rep,
                };
                (generate_instance(&spec).unwrap(), InstanceMeta::from_spec(&spec))
            })
            .collect();
        let spec = ExperimentSpec {
            instances: Vec::new(),
            algorithms: Vec::new(),
            runs_per_instance: 5,
            budget: BudgetSpec::PerCity(400),
            base_seed: 1,
            jobs: 2,
        };
        all_rows.extend(driver_ratio_protocol_in_memory(&spec, &instances).unwrap());
    }

    println!("{:<8} {:>6} {:>8} {:>8} {:>8} {:>8}", "group", "runs", "q1", "median", "q3", "max");
    for s in summarize_ratios(&all_rows) {
        println!(
            "{:<8} {:>6} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            s.placement, s.count, s.q1, s.median, s.q3, s.max
        );
    }

    // on small instances the exact oracles give the idealized ratio
    let spec = GeneratorSpec {
        n: 9,
        placement: PlacementKind::Netgen,
        weight_config: WeightConfig::new(WeightClass::C2, 5.0).unwrap(),
        placement_seed: 3,
        weight_seed: 4,
    };
    let small = generate_instance(&spec).unwrap();
    println!("exact-oracle ratio on a 9-city instance: {:.4}", oracle_ratio(&small).unwrap());
}
