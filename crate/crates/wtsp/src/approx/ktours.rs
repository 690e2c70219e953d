//! Good k-tours: for every `k`, a closed tour through the start city
//! visiting `k` cities. Exact mode returns the optimal k-city tour (which
//! trivially 2-approximates the k-MST lower bound); heuristic mode records
//! the snapshots of a nearest-insertion construction. In both modes the
//! n-tour is produced by the configured TSP subroutine, matching the role
//! it plays in the concatenation scheme.

use super::tsp::{tsp_subroutine, TspMode};
use super::{KTourSet, Provenance};
use crate::core::{tsp_cost, DistMatrix, Error, Instance, Result};

/// Exact mode solves one subset DP over all 2^(n-1) city sets.
pub const EXACT_KTOUR_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KTourMode {
    /// Optimal k-tours by dynamic programming over subsets; n capped by
    /// [`EXACT_KTOUR_CAP`].
    Exact,
    /// Nearest-insertion snapshots; no approximation guarantee.
    Heuristic,
}

/// Builds the family `{T_k}` for `k = 1..n`.
pub fn good_k_tours(instance: &Instance, mode: KTourMode, tsp_mode: TspMode) -> Result<KTourSet> {
    if !instance.is_metric() {
        return Err(Error::MetricRequired);
    }
    let n = instance.n();
    let start = instance.start();
    let mut set = KTourSet::new(n, start);
    set.insert(vec![start], 0.0, Provenance::Exact)?;
    if n == 1 {
        return Ok(set);
    }
    match mode {
        KTourMode::Exact => exact_k_tours(instance, &mut set)?,
        KTourMode::Heuristic => nearest_insertion_k_tours(instance, &mut set)?,
    }
    // the n-tour always comes from the TSP construction
    let full = tsp_subroutine(instance, tsp_mode)?;
    let length = tsp_cost(instance, &full)?;
    set.insert(full.into_vec(), length, Provenance::Heuristic)?;
    Ok(set)
}

/// Optimal tour on every subset containing the start, one path DP over all
/// subsets of the non-start cities. `dp[mask][j]` is the cheapest path from
/// the start through exactly `mask`, ending at the j-th non-start city;
/// closing each end with the return edge yields the optimal k-tour per
/// subset size.
fn exact_k_tours(instance: &Instance, set: &mut KTourSet) -> Result<()> {
    let n = instance.n();
    if n > EXACT_KTOUR_CAP {
        return Err(Error::SizeCap { n, cap: EXACT_KTOUR_CAP });
    }
    let start = instance.start();
    let dist = DistMatrix::new(instance);
    let others: Vec<usize> = (0..n).filter(|&c| c != start).collect();
    let m = others.len();
    let size = (1usize << m) * m;
    let mut dp = vec![f64::INFINITY; size];
    let mut parent = vec![u8::MAX; size];
    let idx = |mask: usize, j: usize| mask * m + j;

    // best closed tour per k (k = popcount + 1), with its end state
    let mut best_len = vec![f64::INFINITY; n + 1];
    let mut best_state = vec![(0usize, 0usize); n + 1];

    for j in 0..m {
        dp[idx(1 << j, j)] = dist.get(start, others[j]);
    }
    for mask in 1usize..(1 << m) {
        let k = mask.count_ones() as usize + 1;
        let mut bits = mask;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let here = dp[idx(mask, j)];
            if !here.is_finite() {
                continue;
            }
            let closed = here + dist.get(others[j], start);
            if closed < best_len[k] {
                best_len[k] = closed;
                best_state[k] = (mask, j);
            }
            let mut rest = !mask & ((1 << m) - 1);
            while rest != 0 {
                let t = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let cand = here + dist.get(others[j], others[t]);
                let slot = idx(mask | (1 << t), t);
                if cand < dp[slot] {
                    dp[slot] = cand;
                    parent[slot] = j as u8;
                }
            }
        }
    }

    for k in 2..n {
        let (mut mask, mut j) = best_state[k];
        let mut rev = Vec::with_capacity(k - 1);
        while mask != 0 {
            rev.push(others[j]);
            let p = parent[idx(mask, j)];
            mask &= !(1 << j);
            if p == u8::MAX {
                break;
            }
            j = p as usize;
        }
        rev.push(start);
        rev.reverse();
        set.insert(rev, best_len[k], Provenance::Exact)?;
    }
    Ok(())
}

/// Nearest insertion from the start city; the partial tour after the k-th
/// insertion is recorded as `T_k`. Successive tours are nested, which keeps
/// the shortcut of their concatenation short in practice.
fn nearest_insertion_k_tours(instance: &Instance, set: &mut KTourSet) -> Result<()> {
    let n = instance.n();
    let start = instance.start();
    let dist = DistMatrix::new(instance);
    let mut tour = vec![start];
    let mut in_tour = vec![false; n];
    in_tour[start] = true;
    // distance from each city to the current tour
    let mut to_tour: Vec<f64> = (0..n).map(|c| dist.get(start, c)).collect();

    while tour.len() < n {
        let mut pick = usize::MAX;
        let mut pick_d = f64::INFINITY;
        for c in 0..n {
            if !in_tour[c] && to_tour[c] < pick_d {
                pick = c;
                pick_d = to_tour[c];
            }
        }
        // cheapest insertion position for the picked city
        let mut best_pos = 1;
        let mut best_delta = f64::INFINITY;
        for pos in 0..tour.len() {
            let a = tour[pos];
            let b = tour[(pos + 1) % tour.len()];
            let delta = dist.get(a, pick) + dist.get(pick, b) - dist.get(a, b);
            if delta < best_delta {
                best_delta = delta;
                best_pos = pos + 1;
            }
        }
        tour.insert(best_pos, pick);
        in_tour[pick] = true;
        for c in 0..n {
            if !in_tour[c] {
                to_tour[c] = to_tour[c].min(dist.get(pick, c));
            }
        }
        if tour.len() < n {
            let length = cycle_len(&dist, &tour);
            set.insert(tour.clone(), length, Provenance::Heuristic)?;
        }
    }
    Ok(())
}

fn cycle_len(dist: &DistMatrix, cities: &[usize]) -> f64 {
    if cities.len() <= 1 {
        return 0.0;
    }
    let mut total = dist.get(cities[cities.len() - 1], cities[0]);
    for w in cities.windows(2) {
        total += dist.get(w[0], w[1]);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::test_support::random_metric_instance;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// k-MST oracle: minimum spanning tree cost over every subset of k
    /// cities containing the start, by direct enumeration with a local
    /// Prim implementation.
    fn k_mst_oracle(instance: &Instance, k: usize) -> f64 {
        let n = instance.n();
        let start = instance.start();
        let others: Vec<usize> = (0..n).filter(|&c| c != start).collect();
        let m = others.len();
        let mut best = f64::INFINITY;
        for mask in 0usize..(1 << m) {
            if mask.count_ones() as usize != k - 1 {
                continue;
            }
            let mut verts = vec![start];
            for j in 0..m {
                if mask & (1 << j) != 0 {
                    verts.push(others[j]);
                }
            }
            best = best.min(prim_cost(instance, &verts));
        }
        best
    }

    fn prim_cost(instance: &Instance, verts: &[usize]) -> f64 {
        let k = verts.len();
        if k <= 1 {
            return 0.0;
        }
        let mut in_tree = vec![false; k];
        let mut best = vec![f64::INFINITY; k];
        in_tree[0] = true;
        for j in 1..k {
            best[j] = instance.distance(verts[0], verts[j]);
        }
        let mut total = 0.0;
        for _ in 1..k {
            let mut pick = usize::MAX;
            let mut pick_d = f64::INFINITY;
            for j in 0..k {
                if !in_tree[j] && best[j] < pick_d {
                    pick = j;
                    pick_d = best[j];
                }
            }
            in_tree[pick] = true;
            total += pick_d;
            for j in 0..k {
                if !in_tree[j] {
                    best[j] = best[j].min(instance.distance(verts[pick], verts[j]));
                }
            }
        }
        total
    }

    #[test]
    fn degenerate_and_full_tours() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let inst = random_metric_instance(7, &mut rng, true);
        for mode in [KTourMode::Exact, KTourMode::Heuristic] {
            let set = good_k_tours(&inst, mode, TspMode::Christofides).unwrap();
            assert!(set.is_complete());
            let t1 = set.get(1).unwrap();
            assert_eq!(t1.cities(), &[0]);
            assert_eq!(t1.length(), 0.0);
            // T_n comes from the TSP subroutine
            let full = set.full_tour().unwrap();
            let sub = tsp_subroutine(&inst, TspMode::Christofides).unwrap();
            assert_eq!(full.cities(), sub.cities());
        }
    }

    #[test]
    fn exact_k_tours_two_approximate_the_k_mst() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let inst = random_metric_instance(8, &mut rng, true);
        let set = good_k_tours(&inst, KTourMode::Exact, TspMode::Christofides).unwrap();
        for k in 1..=8 {
            let tour_len = set.get(k).unwrap().length();
            let mst = k_mst_oracle(&inst, k);
            assert!(
                tour_len <= 2.0 * mst + 1e-9,
                "k={k}: tour {tour_len} exceeds twice the k-MST {mst}"
            );
        }
    }

    #[test]
    fn exact_k_tours_are_optimal_against_enumeration() {
        // optimal k-tour by brute force over subsets and permutations
        fn brute_k_tour(instance: &Instance, k: usize) -> f64 {
            let n = instance.n();
            let start = instance.start();
            let others: Vec<usize> = (0..n).filter(|&c| c != start).collect();
            let m = others.len();
            let mut best = f64::INFINITY;
            for mask in 0usize..(1 << m) {
                if mask.count_ones() as usize != k - 1 {
                    continue;
                }
                let mut chosen: Vec<usize> = (0..m)
                    .filter(|j| mask & (1 << j) != 0)
                    .map(|j| others[j])
                    .collect();
                loop {
                    let mut len = 0.0;
                    let mut prev = start;
                    for &c in &chosen {
                        len += instance.distance(prev, c);
                        prev = c;
                    }
                    len += instance.distance(prev, start);
                    best = best.min(len);
                    if !next_perm(&mut chosen) {
                        break;
                    }
                }
            }
            best
        }
        fn next_perm(seq: &mut [usize]) -> bool {
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

        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..5 {
            let inst = random_metric_instance(7, &mut rng, true);
            let set = good_k_tours(&inst, KTourMode::Exact, TspMode::Christofides).unwrap();
            for k in 2..7 {
                let got = set.get(k).unwrap().length();
                let want = brute_k_tour(&inst, k);
                assert!((got - want).abs() < 1e-9, "k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn recorded_lengths_match_their_tours() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let inst = random_metric_instance(9, &mut rng, true);
        for mode in [KTourMode::Exact, KTourMode::Heuristic] {
            let set = good_k_tours(&inst, mode, TspMode::DoubleTree).unwrap();
            let dist = DistMatrix::new(&inst);
            for k in set.ks().collect::<Vec<_>>() {
                let t = set.get(k).unwrap();
                assert!((t.length() - cycle_len(&dist, t.cities())).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn heuristic_snapshots_are_nested() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        let inst = random_metric_instance(12, &mut rng, true);
        let set = good_k_tours(&inst, KTourMode::Heuristic, TspMode::Christofides).unwrap();
        for k in 1..11 {
            let small: std::collections::HashSet<_> =
                set.get(k).unwrap().cities().iter().copied().collect();
            let large: std::collections::HashSet<_> =
                set.get(k + 1).unwrap().cities().iter().copied().collect();
            assert!(small.is_subset(&large), "insertion snapshots should be nested at k={k}");
        }
    }

    #[test]
    fn exact_mode_respects_its_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let inst = random_metric_instance(EXACT_KTOUR_CAP + 1, &mut rng, true);
        assert!(matches!(
            good_k_tours(&inst, KTourMode::Exact, TspMode::Christofides).unwrap_err(),
            Error::SizeCap { .. }
        ));
        // heuristic mode has no such cap
        assert!(good_k_tours(&inst, KTourMode::Heuristic, TspMode::Christofides).is_ok());
    }

    #[test]
    fn heuristic_mode_scales_past_the_exact_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(56);
        let n = rng.gen_range(40..60);
        let inst = random_metric_instance(n, &mut rng, true);
        let set = good_k_tours(&inst, KTourMode::Heuristic, TspMode::Christofides).unwrap();
        assert!(set.is_complete());
        assert_eq!(set.get(n).unwrap().cities().len(), n);
    }
}
