//! Concatenation of good k-tours into one Hamiltonian tour.
//!
//! With budgets `2*b*c^i` for `i = 1, 2, ...` the sweep selector appends,
//! per budget strictly below `c(T_n)`, the available tour with the most
//! vertices whose length fits; the n-tour always closes the sequence.
//! Shortcutting the concatenated walk (first occurrences) yields the
//! result. `b = c^U` with `U` uniform on `[0, 1)` gives the expected 3.59
//! guarantee for unit weights; grid mode derandomizes by trying a lattice
//! of `U` values and keeping the cheapest tour.

use super::{BMode, KTourSet, Selector, SweepParams};
use crate::core::{weighted_cost, Error, Instance, Result, Tour};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Keeps the first occurrence of every city in `walk`. The walk must begin
/// at the instance's start city and cover all cities; under the triangle
/// inequality the resulting cycle is never longer than the closed walk.
pub fn shortcut(walk: &[usize], instance: &Instance) -> Result<Tour> {
    let n = instance.n();
    if walk.is_empty() {
        return Err(Error::InvalidParam("walk is empty".into()));
    }
    if walk[0] != instance.start() {
        return Err(Error::InvalidParam(format!(
            "walk must begin at the start city {}",
            instance.start()
        )));
    }
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for &c in walk {
        if c >= n {
            return Err(Error::CityNotFound(c));
        }
        if !seen[c] {
            seen[c] = true;
            order.push(c);
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::MissingCity(missing));
    }
    Tour::new(order)
}

/// Sweep selection: the k values appended for offset `b` and growth `c`,
/// ending with the full tour index.
pub fn select_sweep_indices(ktours: &KTourSet, c: f64, b: f64) -> Result<Vec<usize>> {
    if c.is_nan() || c <= 1.0 {
        return Err(Error::InvalidParam(format!("growth base must exceed 1, got {c}")));
    }
    if b.is_nan() || b <= 0.0 {
        return Err(Error::InvalidParam(format!("offset b must be positive, got {b}")));
    }
    let full_len = ktours.full_tour()?.length();
    let mut selected = Vec::new();
    let mut budget = 2.0 * b * c;
    while budget < full_len {
        let mut pick = None;
        for k in ktours.ks() {
            if ktours.get(k).unwrap().length() <= budget {
                pick = Some(k);
            }
        }
        if let Some(k) = pick {
            selected.push(k);
        }
        budget *= c;
    }
    selected.push(ktours.n());
    Ok(selected)
}

/// Shortest-path selection over the auxiliary graph: one node per
/// available tour, arc `i -> j` (i < j) of cost `(n - (i+j)/2 + 1) *
/// c(T_j)`; the returned sequence is the cheapest path from `T_1` to
/// `T_n`.
pub fn select_shortest_path_indices(ktours: &KTourSet) -> Result<Vec<usize>> {
    ktours.full_tour()?;
    let ks: Vec<usize> = ktours.ks().collect();
    if ks[0] != 1 {
        return Err(Error::MissingTour(1));
    }
    let n = ktours.n() as f64;
    let m = ks.len();
    let mut dist = vec![f64::INFINITY; m];
    let mut pred = vec![usize::MAX; m];
    dist[0] = 0.0;
    for jj in 1..m {
        let j = ks[jj];
        let len_j = ktours.get(j).unwrap().length();
        for ii in 0..jj {
            if !dist[ii].is_finite() {
                continue;
            }
            let i = ks[ii];
            let arc = (n - (i + j) as f64 / 2.0 + 1.0) * len_j;
            let cand = dist[ii] + arc;
            if cand < dist[jj] {
                dist[jj] = cand;
                pred[jj] = ii;
            }
        }
    }
    let mut path = Vec::new();
    let mut at = m - 1;
    loop {
        path.push(ks[at]);
        if at == 0 {
            break;
        }
        at = pred[at];
    }
    path.reverse();
    Ok(path)
}

fn walk_of(ktours: &KTourSet, indices: &[usize]) -> Result<Vec<usize>> {
    let mut walk = Vec::new();
    for &k in indices {
        let t = ktours.get(k).ok_or(Error::MissingTour(k))?;
        walk.extend_from_slice(t.cities());
    }
    Ok(walk)
}

/// Builds a Hamiltonian tour on a metric unit-weight instance by
/// concatenating selected k-tours and shortcutting repeats. In grid mode
/// the best tour over the `U` lattice by weighted cost is returned.
pub fn concat_approximation(
    instance: &Instance,
    ktours: &KTourSet,
    params: &SweepParams,
) -> Result<Tour> {
    if !instance.is_metric() {
        return Err(Error::MetricRequired);
    }
    if !instance.has_unit_weights() {
        return Err(Error::InvalidParam(
            "concatenation requires unit weights; expand bounded weights first".into(),
        ));
    }
    if ktours.n() != instance.n() || ktours.start() != instance.start() {
        return Err(Error::DimensionMismatch { expected: instance.n(), found: ktours.n() });
    }
    ktours.full_tour()?;

    let tour_for_b = |b: f64| -> Result<Tour> {
        let indices = select_sweep_indices(ktours, params.c, b)?;
        shortcut(&walk_of(ktours, &indices)?, instance)
    };

    match params.selector {
        Selector::ShortestPath => {
            let indices = select_shortest_path_indices(ktours)?;
            shortcut(&walk_of(ktours, &indices)?, instance)
        }
        Selector::Sweep => match params.b_mode {
            BMode::Fixed(b) => tour_for_b(b),
            BMode::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let u: f64 = rng.gen();
                tour_for_b(params.c.powf(u))
            }
            BMode::Grid(m) => {
                if m == 0 {
                    return Err(Error::InvalidParam("grid size must be positive".into()));
                }
                let mut best: Option<(f64, Tour)> = None;
                for step in 0..m {
                    let u = step as f64 / m as f64;
                    let tour = tour_for_b(params.c.powf(u))?;
                    let cost = weighted_cost(instance, &tour)?;
                    let better = match &best {
                        None => true,
                        Some((c, _)) => cost < *c,
                    };
                    if better {
                        best = Some((cost, tour));
                    }
                }
                Ok(best.expect("grid has at least one step").1)
            }
        },
    }
}
