//! Exact oracles for small instances: weighted TSP, classical TSP and the
//! minimum latency problem.
//!
//! These are the ground truth for every approximation and heuristic test in
//! the crate. The subset DP exploits that the weight multiplier of an edge
//! depends only on the *set* of cities visited before it, never on their
//! order, so states `(visited set, last city)` suffice for all three
//! objectives:
//!
//! * weighted TSP: multiplier = weight of the visited set, closing edge
//!   carries the full weight,
//! * classical TSP: multiplier = 1,
//! * latency: multiplier = number of cities still ahead, no closing edge
//!   (a path, not a round trip).
//!
//! All solvers break ties toward the lexicographically smallest permutation
//! so results are deterministic.

use crate::core::{DistMatrix, Error, Instance, Result, Tour};

/// Hard cap for factorial enumeration: (n-1)! permutations.
pub const BRUTE_FORCE_CAP: usize = 11;
/// Hard cap for the subset DP: 2^n * n^2 time, 2^n * n memory.
pub const SUBSET_DP_CAP: usize = 22;

/// Outcome of an exact solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult {
    pub tour: Tour,
    pub cost: f64,
    /// Diagnostic: permutations evaluated (brute force) or DP states
    /// expanded (subset DP).
    pub nodes_expanded: u64,
}

/// Global minimum of the weighted cost over all tours fixing the start
/// city, by enumeration of all (n-1)! permutations. Ties break toward the
/// lexicographically smallest permutation.
pub fn brute_force_wtsp(instance: &Instance) -> Result<ExactResult> {
    brute_force_wtsp_capped(instance, BRUTE_FORCE_CAP)
}

/// Same as [`brute_force_wtsp`] with a caller-chosen size cap.
pub fn brute_force_wtsp_capped(instance: &Instance, cap: usize) -> Result<ExactResult> {
    let n = instance.n();
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    let start = instance.start();
    let dist = DistMatrix::new(instance);
    let weights = instance.weights();

    if n == 1 {
        return Ok(ExactResult { tour: Tour::new(vec![start])?, cost: 0.0, nodes_expanded: 1 });
    }

    let mut rest: Vec<usize> = (0..n).filter(|&c| c != start).collect();
    let mut perm = Vec::with_capacity(n);
    let mut best_cost = f64::INFINITY;
    let mut best: Vec<usize> = Vec::new();
    let mut expanded = 0u64;
    loop {
        perm.clear();
        perm.push(start);
        perm.extend_from_slice(&rest);
        let cost = crate::core::weighted_cost_fast(&dist, weights, &perm);
        expanded += 1;
        // strict improvement keeps the lexicographically first optimum
        if cost < best_cost {
            best_cost = cost;
            best = perm.clone();
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
    Ok(ExactResult { tour: Tour::new(best)?, cost: best_cost, nodes_expanded: expanded })
}

/// Rearranges into the lexicographically next permutation; false once the
/// sequence is the last one.
fn next_permutation(seq: &mut [usize]) -> bool {
    let n = seq.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

#[derive(Clone, Copy)]
enum Objective {
    Weighted,
    Tsp,
    Latency,
}

/// Exact weighted TSP optimum by dynamic programming over subsets.
pub fn held_karp_wtsp(instance: &Instance) -> Result<ExactResult> {
    subset_dp(instance, Objective::Weighted)
}

/// Exact classical TSP optimum (cycle) by the same subset DP.
pub fn exact_tsp(instance: &Instance) -> Result<ExactResult> {
    subset_dp(instance, Objective::Tsp)
}

/// Exact minimum latency optimum. The result is a path from the start
/// city: no closing edge is charged.
pub fn exact_mlp(instance: &Instance) -> Result<ExactResult> {
    subset_dp(instance, Objective::Latency)
}

/// Suffix-oriented subset DP: `g[mask][j]` is the cheapest completion given
/// that the start city plus `mask` are visited and the tour currently sits
/// at the j-th non-start city. Completion costs only depend on (mask, j),
/// which makes a forward greedy walk over the table reconstruct the
/// lexicographically smallest optimal permutation.
fn subset_dp(instance: &Instance, objective: Objective) -> Result<ExactResult> {
    let n = instance.n();
    if n > SUBSET_DP_CAP {
        return Err(Error::SizeCap { n, cap: SUBSET_DP_CAP });
    }
    let start = instance.start();
    if n == 1 {
        return Ok(ExactResult { tour: Tour::new(vec![start])?, cost: 0.0, nodes_expanded: 1 });
    }
    let dist = DistMatrix::new(instance);
    // non-start cities in ascending order, so bit index order = city order
    let others: Vec<usize> = (0..n).filter(|&c| c != start).collect();
    let m = others.len();
    let full: usize = (1usize << m) - 1;
    let total_weight = instance.total_weight();
    let start_weight = instance.weight(start);

    // weight of a visited mask (start excluded), built incrementally
    let mut mask_weight = vec![0.0f64; 1 << m];
    if matches!(objective, Objective::Weighted) {
        for mask in 1..=full {
            let low = mask.trailing_zeros() as usize;
            mask_weight[mask] = mask_weight[mask & (mask - 1)] + instance.weight(others[low]);
        }
    }
    let multiplier = |mask: usize| -> f64 {
        match objective {
            Objective::Weighted => start_weight + mask_weight[mask],
            Objective::Tsp => 1.0,
            Objective::Latency => (m - mask.count_ones() as usize) as f64,
        }
    };
    let closing = |j: usize| -> f64 {
        match objective {
            Objective::Weighted => total_weight * dist.get(others[j], start),
            Objective::Tsp => dist.get(others[j], start),
            Objective::Latency => 0.0,
        }
    };

    let mut g = vec![f64::INFINITY; (1usize << m) * m];
    let idx = |mask: usize, j: usize| mask * m + j;
    let mut expanded = 0u64;
    for mask in (1..=full).rev() {
        let mult = multiplier(mask);
        let mut bits = mask;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            expanded += 1;
            if mask == full {
                g[idx(mask, j)] = closing(j);
                continue;
            }
            let mut best = f64::INFINITY;
            let mut rest = full & !mask;
            while rest != 0 {
                let k = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let cand = mult * dist.get(others[j], others[k]) + g[idx(mask | (1 << k), k)];
                if cand < best {
                    best = cand;
                }
            }
            g[idx(mask, j)] = best;
        }
    }

    // optimal value: first hop out of the start city
    let first_mult = multiplier(0);
    let mut value = f64::INFINITY;
    for k in 0..m {
        let cand = first_mult * dist.get(start, others[k]) + g[idx(1 << k, k)];
        if cand < value {
            value = cand;
        }
    }

    // forward reconstruction, preferring the smallest city on exact ties;
    // candidates are recomputed with the identical expressions, so the
    // comparison is exact
    let mut perm = Vec::with_capacity(n);
    perm.push(start);
    let mut mask = 0usize;
    let mut target = value;
    let mut at_start = true;
    let mut cur = 0usize;
    while mask != full {
        let mult = multiplier(mask);
        let mut chosen = None;
        for k in 0..m {
            if mask & (1 << k) != 0 {
                continue;
            }
            let hop = if at_start {
                dist.get(start, others[k])
            } else {
                dist.get(others[cur], others[k])
            };
            let cand = mult * hop + g[idx(mask | (1 << k), k)];
            if cand == target {
                chosen = Some(k);
                break;
            }
        }
        let k = chosen.expect("an optimal continuation always exists");
        perm.push(others[k]);
        mask |= 1 << k;
        target = g[idx(mask, k)];
        cur = k;
        at_start = false;
    }

    Ok(ExactResult { tour: Tour::new(perm)?, cost: value, nodes_expanded: expanded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::test_support::{random_metric_instance, random_tour, triangle};
    use crate::core::{latency_cost, tsp_cost, tsp_path_cost, weighted_cost};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Path enumeration oracle for the latency objective, independent of
    /// the DP.
    fn brute_force_mlp(instance: &Instance) -> (Vec<usize>, f64) {
        let n = instance.n();
        let start = instance.start();
        let mut rest: Vec<usize> = (0..n).filter(|&c| c != start).collect();
        let mut best = f64::INFINITY;
        let mut best_perm = vec![start];
        loop {
            let mut perm = vec![start];
            perm.extend_from_slice(&rest);
            let tour = Tour::new(perm.clone()).unwrap();
            let lat = latency_cost(instance, &tour).unwrap();
            if lat < best {
                best = lat;
                best_perm = perm;
            }
            if !super::next_permutation(&mut rest) {
                break;
            }
        }
        (best_perm, best)
    }

    #[test]
    fn triangle_brute_force_uses_evaluated_value() {
        // Unit weights, x = 1000, eps = 1. Direct evaluation of the cost
        // formula gives W(1,3,2) = x + 2x + 3*eps (the closing edge is
        // charged the full weight 3), so the optimum is 3003, reached by
        // the tour (1,3,2).
        let inst = triangle(1000.0, 1.0, vec![1.0; 3]);
        let res = brute_force_wtsp(&inst).unwrap();
        assert_eq!(res.tour.cities(), &[0, 2, 1]);
        assert!((res.cost - 3003.0).abs() < 1e-9);
        assert_eq!(res.nodes_expanded, 2);
    }

    #[test]
    fn indicator_weights_reduce_to_classical_tsp() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let n = rng.gen_range(3..8);
            let inst = random_metric_instance(n, &mut rng, false);
            let mut w = vec![0.0; n];
            w[0] = 1.0;
            let inst = inst.with_weights(w).unwrap();
            let bf = brute_force_wtsp(&inst).unwrap();
            let hk = held_karp_wtsp(&inst).unwrap();
            let tsp = exact_tsp(&inst).unwrap();
            assert!((bf.cost - tsp.cost).abs() < 1e-9);
            assert!((hk.cost - tsp.cost).abs() < 1e-9);
            // the returned tour really is a classical optimum
            assert!((tsp_cost(&inst, &bf.tour).unwrap() - tsp.cost).abs() < 1e-9);
        }
    }

    #[test]
    fn two_city_instance() {
        let inst = Instance::explicit(
            "pair",
            vec![vec![0.0, 4.0], vec![4.0, 0.0]],
            vec![1.0, 2.0],
            true,
        )
        .unwrap();
        let res = brute_force_wtsp(&inst).unwrap();
        // w1*d + (w1+w2)*d = 4 + 12
        assert_eq!(res.cost, 16.0);
        assert_eq!(res.tour.cities(), &[0, 1]);
        let hk = held_karp_wtsp(&inst).unwrap();
        assert_eq!(hk.cost, 16.0);
    }

    #[test]
    fn single_city_instance() {
        let inst = Instance::explicit("one", vec![vec![0.0]], vec![1.0], true).unwrap();
        for res in [
            brute_force_wtsp(&inst).unwrap(),
            held_karp_wtsp(&inst).unwrap(),
            exact_tsp(&inst).unwrap(),
            exact_mlp(&inst).unwrap(),
        ] {
            assert_eq!(res.cost, 0.0);
            assert_eq!(res.tour.cities(), &[0]);
        }
    }

    #[test]
    fn oracles_agree_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..60 {
            let n = rng.gen_range(5..10);
            let unit = rng.gen_bool(0.5);
            let inst = random_metric_instance(n, &mut rng, unit);
            let bf = brute_force_wtsp(&inst).unwrap();
            let hk = held_karp_wtsp(&inst).unwrap();
            assert!(
                (bf.cost - hk.cost).abs() < 1e-9 * (1.0 + bf.cost.abs()),
                "value mismatch: {} vs {}",
                bf.cost,
                hk.cost
            );
            // both report costs consistent with a recomputation
            assert!((weighted_cost(&inst, &bf.tour).unwrap() - bf.cost).abs() < 1e-9);
            assert!((weighted_cost(&inst, &hk.tour).unwrap() - hk.cost).abs() < 1e-9);
        }
    }

    #[test]
    fn latency_is_lower_bound_for_unit_weight_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..30 {
            let n = rng.gen_range(3..9);
            let inst = random_metric_instance(n, &mut rng, true);
            let mlp = exact_mlp(&inst).unwrap();
            let hk = held_karp_wtsp(&inst).unwrap();
            assert!(mlp.cost <= hk.cost + 1e-9);
        }
    }

    #[test]
    fn triangle_mlp_matches_stated_optimum() {
        let inst = triangle(1000.0, 1.0, vec![1.0; 3]);
        let res = exact_mlp(&inst).unwrap();
        assert_eq!(res.tour.cities(), &[0, 1, 2]);
        assert!((res.cost - 1002.0).abs() < 1e-9);
        // the MLP result is a path: its latency, not any cycle cost
        assert!((latency_cost(&inst, &res.tour).unwrap() - res.cost).abs() < 1e-9);
    }

    #[test]
    fn mlp_matches_path_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..30 {
            let n = rng.gen_range(3..9);
            let inst = random_metric_instance(n, &mut rng, true);
            let (oracle_perm, oracle_cost) = brute_force_mlp(&inst);
            let res = exact_mlp(&inst).unwrap();
            assert!((res.cost - oracle_cost).abs() < 1e-9);
            assert_eq!(res.tour.cities(), &oracle_perm[..], "tie-break should match");
        }
    }

    #[test]
    fn hamiltonian_one_path_has_tsp_cost_n() {
        // {1,2} distances with a unit-cost Hamiltonian cycle 0-1-...-k-0
        let n = 7;
        let mut matrix = vec![vec![2.0; n]; n];
        for i in 0..n {
            matrix[i][i] = 0.0;
            let j = (i + 1) % n;
            matrix[i][j] = 1.0;
            matrix[j][i] = 1.0;
        }
        let inst = Instance::explicit("cycle", matrix, vec![1.0; n], true).unwrap();
        let res = exact_tsp(&inst).unwrap();
        assert_eq!(res.cost, n as f64);
    }

    #[test]
    fn caps_are_enforced() {
        let n = BRUTE_FORCE_CAP + 1;
        let inst = random_metric_instance(n, &mut ChaCha8Rng::seed_from_u64(24), true);
        assert!(matches!(brute_force_wtsp(&inst).unwrap_err(), Error::SizeCap { .. }));
        let n = SUBSET_DP_CAP + 1;
        let inst = random_metric_instance(n, &mut ChaCha8Rng::seed_from_u64(25), true);
        assert!(matches!(held_karp_wtsp(&inst).unwrap_err(), Error::SizeCap { .. }));
        assert!(matches!(exact_tsp(&inst).unwrap_err(), Error::SizeCap { .. }));
        assert!(matches!(exact_mlp(&inst).unwrap_err(), Error::SizeCap { .. }));
    }

    #[test]
    fn relabeling_non_start_cities_preserves_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for _ in 0..10 {
            let n = rng.gen_range(4..8);
            let inst = random_metric_instance(n, &mut rng, false);
            let base = held_karp_wtsp(&inst).unwrap().cost;

            // relabel cities 1..n by a random permutation fixing the start
            let relabel = random_tour(n - 1, &mut rng);
            let map: Vec<usize> = std::iter::once(0)
                .chain(relabel.cities().iter().map(|&c| c + 1))
                .collect();
            let mut matrix = vec![vec![0.0; n]; n];
            for a in 0..n {
                for b in 0..n {
                    matrix[map[a]][map[b]] = inst.distance(a, b);
                }
            }
            let mut weights = vec![0.0; n];
            for c in 0..n {
                weights[map[c]] = inst.weight(c);
            }
            let relabeled = Instance::explicit("relabel", matrix, weights, true).unwrap();
            let permuted = held_karp_wtsp(&relabeled).unwrap().cost;
            assert!((base - permuted).abs() < 1e-9 * (1.0 + base.abs()));
        }
    }

    #[test]
    fn brute_force_visits_every_permutation() {
        let inst = random_metric_instance(6, &mut ChaCha8Rng::seed_from_u64(27), true);
        let res = brute_force_wtsp(&inst).unwrap();
        assert_eq!(res.nodes_expanded, 120); // 5!
    }

    #[test]
    fn solvers_are_deterministic() {
        let inst = random_metric_instance(7, &mut ChaCha8Rng::seed_from_u64(28), false);
        let a = held_karp_wtsp(&inst).unwrap();
        let b = held_karp_wtsp(&inst).unwrap();
        assert_eq!(a.tour, b.tour);
        assert_eq!(a.cost, b.cost);
    }

    #[test]
    fn non_default_start_city() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let inst = random_metric_instance(6, &mut rng, false).with_start(3).unwrap();
        let bf = brute_force_wtsp(&inst).unwrap();
        let hk = held_karp_wtsp(&inst).unwrap();
        assert_eq!(bf.tour.cities()[0], 3);
        assert_eq!(hk.tour.cities()[0], 3);
        assert!((bf.cost - hk.cost).abs() < 1e-9);
    }

    #[test]
    fn mlp_result_ignores_closing_edge() {
        // two far apart pairs: optimal path need not close cheaply
        let inst = Instance::euclidean(
            "line",
            vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (100.0, 0.0)],
            vec![1.0; 4],
        )
        .unwrap();
        let res = exact_mlp(&inst).unwrap();
        assert_eq!(res.tour.cities(), &[0, 1, 2, 3]);
        let path = tsp_path_cost(&inst, &res.tour).unwrap();
        assert!(path < tsp_cost(&inst, &res.tour).unwrap());
    }
}
