//! A miniature batch experiment: three mutation operators on fresh rue
//! instances, perf aggregation and pairwise rank tests.
//!
//! ```bash
//! cargo run -p wtsp --example experiment
//! ```

use wtsp::harness::stats::compute_perf_table;
use wtsp::harness::{run_experiment_in_memory, AlgorithmSpec, BudgetSpec, ExperimentSpec};
use wtsp::heuristics::{Fitness, MutationKind};
use wtsp::instances::io::InstanceMeta;
use wtsp::instances::{generate_instance, GeneratorSpec, PlacementKind, WeightClass, WeightConfig};

fn main() {
    let instances: Vec<_> = (1..=10u64)
        .map(|rep| {
            let spec = GeneratorSpec {
                n: 50,
                placement: PlacementKind::Rue,
                weight_config: WeightConfig::new(WeightClass::C2, 5.0).unwrap(),
                placement_seed: rep,
                weight_seed: rep,
            };
            (generate_instance(&spec).unwrap(), InstanceMeta::from_spec(&spec))
        })
        .collect();

    let spec = ExperimentSpec {
        instances: Vec::new(),
        algorithms: vec![
            AlgorithmSpec { mutation: MutationKind::Inversion, fitness: Fitness::Weighted },
            AlgorithmSpec { mutation: MutationKind::Exchange, fitness: Fitness::Weighted },
            AlgorithmSpec { mutation: MutationKind::Jump, fitness: Fitness::Weighted },
        ],
        runs_per_instance: 10,
        budget: BudgetSpec::PerCity(1000),
        base_seed: 42,
        jobs: 2,
    };
    let outcomes = run_experiment_in_memory(&spec, &instances).unwrap();
    println!("{} runs finished", outcomes.len());

    let rows: Vec<_> = outcomes.iter().map(|o| o.row.clone()).collect();
    let (_, cells) = compute_perf_table(&rows).unwrap();
    println!("{:<14} {:>8} {:>8} {:>8}  significantly better than", "algorithm", "mean", "std", "median");
    for cell in &cells {
        let beats: Vec<&str> = cell
            .comparisons
            .iter()
            .filter(|c| c.significant)
            .map(|c| c.other.as_str())
            .collect();
        println!(
            "{:<14} {:>8.2} {:>8.2} {:>8.2}  {}",
            cell.algorithm,
            cell.mean,
            cell.std,
            cell.median,
            if beats.is_empty() { "-".to_string() } else { beats.join(", ") }
        );
    }
}
