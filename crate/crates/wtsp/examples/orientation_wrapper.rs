//! Tour orientation on {1,2} distances: a classical TSP tour read in the
//! better of its two directions approximates the weighted optimum.
//!
//! ```bash
//! cargo run -p wtsp --example orientation_wrapper
//! ```

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wtsp::approx::best_orientation;
use wtsp::core::{weighted_cost, Instance};
use wtsp::exact::{exact_tsp, held_karp_wtsp};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let n = 8;
        let mut matrix = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in (a + 1)..n {
                let d = if rng.gen_bool(0.5) { 1.0 } else { 2.0 };
                matrix[a][b] = d;
                matrix[b][a] = d;
            }
        }
        let instance = Instance::explicit(format!("one-two-{i}"), matrix, vec![1.0; n], true).unwrap();

        let tsp_tour = exact_tsp(&instance).unwrap().tour;
        let forward = weighted_cost(&instance, &tsp_tour).unwrap();
        let oriented = best_orientation(&instance, &tsp_tour).unwrap();
        let best = weighted_cost(&instance, &oriented).unwrap();
        let opt = held_karp_wtsp(&instance).unwrap().cost;
        let ratio = best / opt;
        worst = worst.max(ratio);
        println!(
            "instance {i}: forward W = {forward:>5.1}, best orientation W = {best:>5.1}, \
             optimum {opt:>5.1}, ratio {ratio:.4}"
        );
    }
    println!("worst ratio {worst:.4} (the orientation wrapper guarantees 1.5 for exact tours)");
}
