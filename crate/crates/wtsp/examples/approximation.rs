//! The concatenation scheme end to end: good k-tours, geometric sweep with
//! a derandomizing grid, and the ratio against the exact optimum.
//!
//! ```bash
//! cargo run -p wtsp --example approximation
//! ```

use wtsp::approx::{
    concat_approximation, good_k_tours, select_sweep_indices, BMode, KTourMode, Selector,
    SweepParams, TspMode,
};
use wtsp::core::weighted_cost;
use wtsp::exact::held_karp_wtsp;
use wtsp::instances::{generate_instance, GeneratorSpec, PlacementKind, WeightClass, WeightConfig};

fn main() {
    let spec = GeneratorSpec {
        n: 10,
        placement: PlacementKind::Netgen,
        weight_config: WeightConfig::new(WeightClass::C1, 1.0).unwrap(), // unit weights
        placement_seed: 5,
        weight_seed: 1,
    };
    let instance = generate_instance(&spec).unwrap();

    let ktours = good_k_tours(&instance, KTourMode::Exact, TspMode::Christofides).unwrap();
    println!("good k-tour lengths:");
    for k in ktours.ks() {
        let t = ktours.get(k).unwrap();
        println!("  c(T_{k}) = {:>10.3}  [{:?}]", t.length(), t.provenance());
    }

    // one sweep at b = 1: which tours get appended before the n-tour
    let selected = select_sweep_indices(&ktours, 3.59, 1.0).unwrap();
    println!("sweep selection at b = 1: {selected:?}");

    let opt = held_karp_wtsp(&instance).unwrap().cost;
    for (label, params) in [
        ("grid sweep (64 offsets)", SweepParams::default()),
        (
            "single random offset",
            SweepParams { b_mode: BMode::Random { seed: 7 }, ..SweepParams::default() },
        ),
        (
            "shortest-path selector",
            SweepParams { selector: Selector::ShortestPath, ..SweepParams::default() },
        ),
    ] {
        let tour = concat_approximation(&instance, &ktours, &params).unwrap();
        let cost = weighted_cost(&instance, &tour).unwrap();
        println!("{label:<24} W = {cost:>10.3}  ratio {:.4}", cost / opt);
    }
    println!("exact optimum            W = {opt:>10.3}");
}
