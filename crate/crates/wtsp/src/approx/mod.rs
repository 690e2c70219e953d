//! Approximation constructions for the metric W-TSP: good k-tours, the
//! geometric-sweep concatenation scheme, weight expansion/collapse, and the
//! reverse-orientation wrapper for `{1,2}` distances.
//!
//! The unit-weight pipeline concatenates closed tours through the start city
//! of geometrically growing length budgets and shortcuts the resulting walk;
//! with good k-tours available the weighted cost of the result is within a
//! factor 3.59 of the optimum. Bounded positive integer weights reduce to
//! the unit-weight case by duplicating each city `w(i)` times at mutual
//! distance zero ([`expand_weights`]) and re-grouping the copies afterwards
//! ([`collapse_tour`]).

mod concat;
mod ktours;
mod tsp;
mod weights;

pub use concat::{
    concat_approximation, select_shortest_path_indices, select_sweep_indices, shortcut,
};
pub use ktours::{good_k_tours, KTourMode, EXACT_KTOUR_CAP};
pub use tsp::{tsp_construction, tsp_subroutine, ConstructedTour, TspMode, MATCHING_EXACT_CAP};
pub use weights::{block_substitute, collapse_tour, expand_weights, CopyMap, EXPANSION_CAP};

use crate::core::{weighted_cost, Error, Instance, Result, Tour};
use std::collections::BTreeMap;

/// How a k-tour was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Optimal k-city tour through the start (guarantee-safe).
    Exact,
    /// Nearest-insertion snapshot or TSP-subroutine construction; no
    /// k-MST guarantee.
    Heuristic,
    /// Gap filler: interpolated length, truncated neighbor tour.
    Phantom,
}

/// A closed tour through the start city visiting `k` distinct cities.
#[derive(Debug, Clone)]
pub struct KTour {
    cities: Vec<usize>,
    length: f64,
    provenance: Provenance,
}

impl KTour {
    pub fn k(&self) -> usize {
        self.cities.len()
    }

    /// Visit order; starts at the start city, the closing edge is implied.
    pub fn cities(&self) -> &[usize] {
        &self.cities
    }

    /// Recorded cycle length `c(T_k)`. For phantom tours this is the
    /// interpolated value, not the length of the truncated realization.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
}

/// An indexed family `{T_k}` of closed tours through the start city, the
/// input of [`concat_approximation`]. Lengths need not be monotone in `k`.
#[derive(Debug, Clone)]
pub struct KTourSet {
    n: usize,
    start: usize,
    tours: BTreeMap<usize, KTour>,
}

impl KTourSet {
    pub fn new(n: usize, start: usize) -> Self {
        KTourSet { n, start, tours: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Registers the tour for `k = cities.len()`, replacing any previous
    /// one. Cities must be distinct, in range, and begin with the start.
    pub fn insert(
        &mut self,
        cities: Vec<usize>,
        length: f64,
        provenance: Provenance,
    ) -> Result<()> {
        if cities.is_empty() || cities.len() > self.n {
            return Err(Error::InvalidParam(format!(
                "k-tour must visit between 1 and {} cities",
                self.n
            )));
        }
        if cities[0] != self.start {
            return Err(Error::InvalidParam(format!(
                "k-tour must begin at the start city {}",
                self.start
            )));
        }
        let mut seen = vec![false; self.n];
        for &c in &cities {
            if c >= self.n {
                return Err(Error::CityNotFound(c));
            }
            if seen[c] {
                return Err(Error::InvalidParam(format!("k-tour visits city {c} twice")));
            }
            seen[c] = true;
        }
        if length.is_nan() || length < 0.0 {
            return Err(Error::InvalidParam("k-tour length must be nonnegative".into()));
        }
        self.tours.insert(cities.len(), KTour { cities, length, provenance });
        Ok(())
    }

    pub fn get(&self, k: usize) -> Option<&KTour> {
        self.tours.get(&k)
    }

    /// The n-tour that every concatenation ends with.
    pub fn full_tour(&self) -> Result<&KTour> {
        self.tours.get(&self.n).ok_or(Error::MissingTour(self.n))
    }

    /// Available k values in increasing order.
    pub fn ks(&self) -> impl Iterator<Item = usize> + '_ {
        self.tours.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.tours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tours.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.tours.len() == self.n
    }

    /// Fills every missing `k` with a phantom tour: the recorded length is
    /// linearly interpolated between the nearest available neighbors (with
    /// `(1, 0)` as the implicit lower anchor) and the realization truncates
    /// the upper neighbor to its first `k` cities. Requires the n-tour.
    pub fn fill_phantoms(&mut self) -> Result<()> {
        self.full_tour()?;
        let have: Vec<(usize, f64)> = self.tours.iter().map(|(&k, t)| (k, t.length)).collect();
        let mut anchors = Vec::with_capacity(have.len() + 1);
        if have.first().map(|&(k, _)| k) != Some(1) {
            anchors.push((1usize, 0.0));
        }
        anchors.extend(have);
        for win in anchors.windows(2) {
            let (lo, c_lo) = win[0];
            let (hi, c_hi) = win[1];
            for k in (lo + 1)..hi {
                let frac = (k - lo) as f64 / (hi - lo) as f64;
                let length = c_lo + (c_hi - c_lo) * frac;
                let cities = self.tours[&hi].cities[..k].to_vec();
                self.tours.insert(k, KTour { cities, length, provenance: Provenance::Phantom });
            }
        }
        if !self.tours.contains_key(&1) {
            self.tours.insert(
                1,
                KTour { cities: vec![self.start], length: 0.0, provenance: Provenance::Phantom },
            );
        }
        Ok(())
    }
}

/// How the random offset `b = c^U` of the geometric sweep is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BMode {
    /// One draw of `U` uniform on `[0, 1)` from a seeded generator.
    Random { seed: u64 },
    /// Caller-supplied `b > 0`.
    Fixed(f64),
    /// Derandomized: `U` ranges over `{0, 1/m, ..., (m-1)/m}` and the tour
    /// with the lowest weighted cost is kept (ties toward the lowest `U`).
    Grid(usize),
}

/// How the subtour index sequence is selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    /// Geometric budgets `2*b*c^i`: per budget, the tour with the most
    /// vertices not exceeding it.
    Sweep,
    /// Shortest path in the auxiliary graph whose arc `i -> j` costs
    /// `(n - (i+j)/2 + 1) * c(T_j)`.
    ShortestPath,
}

/// Parameters of [`concat_approximation`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    /// Geometric growth base, > 1.
    pub c: f64,
    pub b_mode: BMode,
    pub selector: Selector,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams { c: 3.59, b_mode: BMode::Grid(64), selector: Selector::Sweep }
    }
}

/// Returns whichever of `tour` and its reversal has the lower weighted
/// cost; ties keep the forward orientation. For `{1,2}` distances with a
/// TSP tour of ratio alpha as input, the winner is a 1.5*alpha
/// approximation of the weighted optimum.
pub fn best_orientation(instance: &Instance, tour: &Tour) -> Result<Tour> {
    let forward = weighted_cost(instance, tour)?;
    let reversed = tour.reversed();
    let backward = weighted_cost(instance, &reversed)?;
    if backward < forward {
        Ok(reversed)
    } else {
        Ok(tour.clone())
    }
}

/// Full pipeline for positive integer weights: expand each city into
/// `w(i)` unit-weight copies, run the concatenation scheme on the expanded
/// instance, and collapse the copies back into a tour of the original.
pub fn approximate_bounded_weights(
    instance: &Instance,
    mode: KTourMode,
    tsp_mode: TspMode,
    params: &SweepParams,
) -> Result<Tour> {
    let (expanded, map) = expand_weights(instance)?;
    let ktours = good_k_tours(&expanded, mode, tsp_mode)?;
    let expanded_tour = concat_approximation(&expanded, &ktours, params)?;
    collapse_tour(&expanded_tour, &map, instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::test_support::{random_metric_instance, random_tour};
    use crate::core::tsp_cost;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn best_orientation_breaks_ties_forward() {
        // all pairwise distances equal: both orientations cost the same
        let inst = Instance::explicit(
            "sym",
            vec![
                vec![0.0, 1.0, 1.0, 1.0],
                vec![1.0, 0.0, 1.0, 1.0],
                vec![1.0, 1.0, 0.0, 1.0],
                vec![1.0, 1.0, 1.0, 0.0],
            ],
            vec![1.0; 4],
            true,
        )
        .unwrap();
        let t = Tour::new(vec![0, 2, 1, 3]).unwrap();
        assert_eq!(best_orientation(&inst, &t).unwrap(), t);
    }

    #[test]
    fn best_orientation_takes_the_cheaper_reading() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..50 {
            let n = rng.gen_range(3..10);
            let inst = random_metric_instance(n, &mut rng, false);
            let t = random_tour(n, &mut rng);
            let picked = best_orientation(&inst, &t).unwrap();
            let w_forward = weighted_cost(&inst, &t).unwrap();
            let w_backward = weighted_cost(&inst, &t.reversed()).unwrap();
            let w_picked = weighted_cost(&inst, &picked).unwrap();
            assert!((w_picked - w_forward.min(w_backward)).abs() < 1e-12);
        }
    }

    #[test]
    fn ktour_set_validates_entries() {
        let mut set = KTourSet::new(5, 0);
        assert!(set.insert(vec![0, 2, 4], 3.0, Provenance::Exact).is_ok());
        assert!(set.insert(vec![2, 0], 1.0, Provenance::Exact).is_err()); // wrong start
        assert!(set.insert(vec![0, 2, 2], 1.0, Provenance::Exact).is_err()); // dup
        assert!(set.insert(vec![0, 9], 1.0, Provenance::Exact).is_err()); // range
        assert!(set.insert(vec![], 0.0, Provenance::Exact).is_err());
        assert!(set.insert(vec![0, 1], -1.0, Provenance::Exact).is_err());
        assert_eq!(set.len(), 1);
        assert!(matches!(set.full_tour().unwrap_err(), Error::MissingTour(5)));
    }

    #[test]
    fn phantom_fill_interpolates_and_truncates() {
        let mut set = KTourSet::new(6, 0);
        set.insert(vec![0, 1], 4.0, Provenance::Exact).unwrap();
        set.insert(vec![0, 1, 2, 3, 4, 5], 16.0, Provenance::Heuristic).unwrap();
        set.fill_phantoms().unwrap();
        assert!(set.is_complete());
        // below the lowest anchor: interpolate from (1, 0)
        assert_eq!(set.get(1).unwrap().length(), 0.0);
        // between k=2 (4.0) and k=6 (16.0): 4 + 2 * (16-4)/4
        let t4 = set.get(4).unwrap();
        assert!((t4.length() - 10.0).abs() < 1e-12);
        assert_eq!(t4.cities(), &[0, 1, 2, 3]);
        assert_eq!(t4.provenance(), Provenance::Phantom);
        // existing entries untouched
        assert_eq!(set.get(2).unwrap().provenance(), Provenance::Exact);
    }

    #[test]
    fn phantom_fill_requires_the_full_tour() {
        let mut set = KTourSet::new(4, 0);
        set.insert(vec![0, 1], 2.0, Provenance::Exact).unwrap();
        assert!(matches!(set.fill_phantoms().unwrap_err(), Error::MissingTour(4)));
    }

    /// Positional sum of 2-edges: the weighted cost of a unit-weight tour
    /// on a {1,2} instance is n(n+1)/2 + R where R adds the position of
    /// every 2-edge (closing edge = position n).
    fn positional_two_edge_sum(inst: &Instance, tour: &Tour) -> (usize, f64) {
        let p = tour.cities();
        let n = p.len();
        let mut k = 0usize;
        let mut r = 0.0f64;
        for i in 0..n {
            let (a, b) = if i + 1 < n { (p[i], p[i + 1]) } else { (p[n - 1], p[0]) };
            if inst.distance(a, b) == 2.0 {
                k += 1;
                r += (i + 1) as f64;
            }
        }
        (k, r)
    }

    fn random_one_two_instance(n: usize, rng: &mut ChaCha8Rng) -> Instance {
        let mut matrix = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in (a + 1)..n {
                let d = if rng.gen_bool(0.5) { 1.0 } else { 2.0 };
                matrix[a][b] = d;
                matrix[b][a] = d;
            }
        }
        Instance::explicit("one-two", matrix, vec![1.0; n], true).unwrap()
    }

    #[test]
    fn half_cost_orientation_bound_on_one_two_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let n = rng.gen_range(4..10);
            let inst = random_one_two_instance(n, &mut rng);
            let t = random_tour(n, &mut rng).normalized(0).unwrap();
            let (k, r) = positional_two_edge_sum(&inst, &t);
            let base = (n * (n + 1)) as f64 / 2.0;
            // W = n(n+1)/2 + R, and reversal maps position i to n+1-i
            assert!((weighted_cost(&inst, &t).unwrap() - (base + r)).abs() < 1e-9);
            let (k_rev, r_rev) = positional_two_edge_sum(&inst, &t.reversed());
            assert_eq!(k, k_rev);
            assert!((r_rev - (k as f64 * (n as f64 + 1.0) - r)).abs() < 1e-9);
            // the better orientation pays at most half of the orientation sum
            let total = k as f64 * (n as f64 + 1.0);
            assert!(r.min(total - r) <= total / 2.0);
            let best = best_orientation(&inst, &t).unwrap();
            assert!(
                weighted_cost(&inst, &best).unwrap() <= base + total / 2.0 + 1e-9,
                "orientation bound violated"
            );
        }
    }

    #[test]
    fn one_two_wrapper_stays_within_ratio() {
        use crate::exact::{exact_tsp, held_karp_wtsp};
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..30 {
            let n = rng.gen_range(5..9);
            let inst = random_one_two_instance(n, &mut rng);
            let tsp_tour = exact_tsp(&inst).unwrap().tour;
            let best = best_orientation(&inst, &tsp_tour).unwrap();
            let opt = held_karp_wtsp(&inst).unwrap().cost;
            let got = weighted_cost(&inst, &best).unwrap();
            assert!(got <= 1.5 * opt + 1e-9, "ratio {} too large", got / opt);
        }
    }

    #[test]
    fn one_two_wrapper_holds_for_approximate_tours_too() {
        // with a tour of TSP ratio alpha, the better orientation stays
        // within 1.5 * alpha of the weighted optimum
        use crate::exact::{exact_tsp, held_karp_wtsp};
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..20 {
            let n = rng.gen_range(5..9);
            let inst = random_one_two_instance(n, &mut rng);
            let tour = tsp_subroutine(&inst, TspMode::Christofides).unwrap();
            let alpha = tsp_cost(&inst, &tour).unwrap() / exact_tsp(&inst).unwrap().cost;
            let best = best_orientation(&inst, &tour).unwrap();
            let ratio =
                weighted_cost(&inst, &best).unwrap() / held_karp_wtsp(&inst).unwrap().cost;
            assert!(ratio <= 1.5 * alpha + 1e-9, "ratio {ratio} vs 1.5 * alpha {alpha}");
        }
    }

    #[test]
    fn pipeline_on_unit_weights_matches_plain_concatenation() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..10 {
            let n = rng.gen_range(4..9);
            let inst = random_metric_instance(n, &mut rng, true);
            let params = SweepParams::default();
            let direct = {
                let ktours = good_k_tours(&inst, KTourMode::Exact, TspMode::Christofides).unwrap();
                concat_approximation(&inst, &ktours, &params).unwrap()
            };
            let via_pipeline = approximate_bounded_weights(
                &inst,
                KTourMode::Exact,
                TspMode::Christofides,
                &params,
            )
            .unwrap();
            assert_eq!(direct, via_pipeline);
        }
    }

    #[test]
    fn pipeline_output_is_a_permutation() {
        let inst = crate::core::test_support::triangle(50.0, 1.0, vec![1.0, 1.0, 2.0]);
        let t = approximate_bounded_weights(
            &inst,
            KTourMode::Exact,
            TspMode::Christofides,
            &SweepParams::default(),
        )
        .unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.cities()[0], 0);
        let _ = tsp_cost(&inst, &t).unwrap();
    }
}
