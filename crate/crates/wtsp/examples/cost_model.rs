//! The weighted cost model on a worked example: the three-city triangle
//! with one short and two long edges.
//!
//! ```bash
//! cargo run -p wtsp --example cost_model
//! ```

use wtsp::core::{cost_report, latency_cost, tsp_path_cost, weighted_cost, Instance, Tour};

fn main() {
    // d(1,2) = 1, d(2,3) = d(1,3) = 1000, unit weights
    let instance = Instance::explicit(
        "triangle",
        vec![
            vec![0.0, 1.0, 1000.0],
            vec![1.0, 0.0, 1000.0],
            vec![1000.0, 1000.0, 0.0],
        ],
        vec![1.0, 1.0, 1.0],
        true,
    )
    .unwrap();

    for perm in [vec![0, 1, 2], vec![0, 2, 1]] {
        let tour = Tour::new(perm).unwrap();
        let report = cost_report(&instance, &tour).unwrap();
        println!(
            "tour {tour}: weighted {:>6}  tsp {:>6}  latency {:>6}",
            report.weighted, report.tsp, report.latency
        );
    }

    // reversing a tour turns latency into weighted cost:
    // L(p) = W(p_1, p_n, ..., p_2) - path(p) - d(p_1, p_n)
    let tour = Tour::new(vec![0, 1, 2]).unwrap();
    let lhs = latency_cost(&instance, &tour).unwrap();
    let rhs = weighted_cost(&instance, &tour.reversed()).unwrap()
        - tsp_path_cost(&instance, &tour).unwrap()
        - instance.distance(0, 2);
    println!("latency identity: L = {lhs}, reconstructed = {rhs}");

    // the short edge is cheap early and expensive late: visiting the far
    // city first wins under the weighted objective
    let near_first = weighted_cost(&instance, &Tour::new(vec![0, 1, 2]).unwrap()).unwrap();
    let far_first = weighted_cost(&instance, &Tour::new(vec![0, 2, 1]).unwrap()).unwrap();
    println!("near city first: W = {near_first}; far city first: W = {far_first}");
}
