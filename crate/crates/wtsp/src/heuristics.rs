//! Randomized local search over permutations with the three classical
//! mutation operators (inversion, exchange, jump), under either the
//! weighted or the classical TSP fitness function.
//!
//! The search starts from a uniformly random tour, mutates it once per
//! iteration, and accepts whenever the fitness does not get worse. The
//! start city is pinned at position 1, so the weighted fitness is always
//! evaluated from the fixed start without re-rotating. Runs are
//! deterministic in the seed.

use crate::core::{
    tsp_cost_fast, weighted_cost_fast, DistMatrix, Error, Instance, Result, Tour,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

/// Mutation operator of one RLS step. Each maps valid permutations to
/// valid permutations and never moves position 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationKind {
    /// Reverse the segment between two positions.
    Inversion,
    /// Swap the cities at two positions.
    Exchange,
    /// Remove the city at the first position and reinsert it at the
    /// second, shifting the gap.
    Jump,
}

impl MutationKind {
    pub const ALL: [MutationKind; 3] =
        [MutationKind::Inversion, MutationKind::Exchange, MutationKind::Jump];

    pub fn name(&self) -> &'static str {
        match self {
            MutationKind::Inversion => "inversion",
            MutationKind::Exchange => "exchange",
            MutationKind::Jump => "jump",
        }
    }
}

impl std::str::FromStr for MutationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inversion" => Ok(MutationKind::Inversion),
            "exchange" => Ok(MutationKind::Exchange),
            "jump" => Ok(MutationKind::Jump),
            other => Err(Error::InvalidParam(format!("unknown mutation '{other}'"))),
        }
    }
}

/// Fitness function driving the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fitness {
    /// Weighted cost W.
    Weighted,
    /// Classical cycle length, ignoring node weights.
    Tsp,
}

impl Fitness {
    pub fn name(&self) -> &'static str {
        match self {
            Fitness::Weighted => "weighted",
            Fitness::Tsp => "tsp",
        }
    }
}

impl std::str::FromStr for Fitness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weighted" => Ok(Fitness::Weighted),
            "tsp" => Ok(Fitness::Tsp),
            other => Err(Error::InvalidParam(format!("unknown fitness '{other}'"))),
        }
    }
}

/// Configuration of one RLS run.
#[derive(Debug, Clone)]
pub struct RlsConfig {
    pub fitness: Fitness,
    pub mutation: MutationKind,
    /// Total number of fitness evaluations, the initial one included.
    pub budget: u64,
    pub seed: u64,
    /// Record every strict improvement as `(evaluation index, cost)`.
    pub record_trace: bool,
    /// Optional wall-clock stop as an alternative to the evaluation
    /// budget. Runs stop at whichever limit is hit first; determinism only
    /// holds without a time limit.
    pub time_limit: Option<Duration>,
}

impl RlsConfig {
    pub fn new(mutation: MutationKind, fitness: Fitness, budget: u64, seed: u64) -> Self {
        RlsConfig { fitness, mutation, budget, seed, record_trace: false, time_limit: None }
    }
}

/// The stopping budget used throughout the experiments: `1000 * n`
/// evaluations.
pub fn default_budget(n: usize) -> u64 {
    1000 * n as u64
}

/// Outcome of an RLS run.
#[derive(Debug, Clone)]
pub struct RlsResult {
    pub best_tour: Tour,
    pub best_cost: f64,
    pub evaluations_used: u64,
    pub trace: Option<Vec<(u64, f64)>>,
}

/// Applies one random mutation. Positions are drawn uniformly from the
/// non-start slots; tours with fewer than three cities are returned
/// unchanged.
pub fn mutate<R: Rng>(tour: &Tour, kind: MutationKind, rng: &mut R) -> Tour {
    let n = tour.len();
    if n < 3 {
        return tour.clone();
    }
    let (i, j) = draw_positions(n, kind, rng);
    let mut perm = tour.cities().to_vec();
    apply_mutation(&mut perm, kind, i, j);
    Tour::new(perm).expect("mutations preserve permutations")
}

/// Two distinct positions from `1..n` (position 0 is pinned). Inversion
/// and exchange are symmetric in their arguments. For jump the pair is
/// ordered later-to-earlier: the drawn city always moves toward the start
/// of the tour and never postpones its own weight.
fn draw_positions<R: Rng>(n: usize, kind: MutationKind, rng: &mut R) -> (usize, usize) {
    let a = rng.gen_range(1..n);
    let mut b = rng.gen_range(1..n - 1);
    if b >= a {
        b += 1;
    }
    match kind {
        MutationKind::Inversion | MutationKind::Exchange => (a.min(b), a.max(b)),
        MutationKind::Jump => (a.max(b), a.min(b)),
    }
}

/// The deterministic core of [`mutate`], exposed for position-level tests.
/// `i` and `j` may come in either order; jump is the only operator where
/// the order matters (the city at `i` is reinserted at position `j`).
pub fn apply_mutation(perm: &mut [usize], kind: MutationKind, i: usize, j: usize) {
    let (lo, hi) = (i.min(j), i.max(j));
    match kind {
        MutationKind::Inversion => perm[lo..=hi].reverse(),
        MutationKind::Exchange => perm.swap(lo, hi),
        MutationKind::Jump => {
            if i < j {
                perm[i..=j].rotate_left(1);
            } else {
                perm[j..=i].rotate_right(1);
            }
        }
    }
}

/// Undoes `apply_mutation` with the same arguments.
fn undo_mutation(perm: &mut [usize], kind: MutationKind, i: usize, j: usize) {
    match kind {
        MutationKind::Inversion | MutationKind::Exchange => apply_mutation(perm, kind, i, j),
        MutationKind::Jump => apply_mutation(perm, kind, j, i),
    }
}

/// Randomized local search: start from a uniformly random tour (start city
/// pinned in front), mutate, accept when the cost does not increase, stop
/// after exactly `budget` evaluations.
pub fn rls(instance: &Instance, config: &RlsConfig) -> Result<RlsResult> {
    if config.budget == 0 {
        return Err(Error::InvalidParam("budget must be at least 1".into()));
    }
    let n = instance.n();
    let start = instance.start();
    let dist = DistMatrix::new(instance);
    let weights = instance.weights();
    let eval = |perm: &[usize]| -> f64 {
        match config.fitness {
            Fitness::Weighted => weighted_cost_fast(&dist, weights, perm),
            Fitness::Tsp => tsp_cost_fast(&dist, perm),
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    // uniformly random permutation with the start city rotated to front
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    perm.push(start);
    perm.extend((0..n).filter(|&c| c != start));
    for i in (2..n).rev() {
        let j = rng.gen_range(1..=i);
        perm.swap(i, j);
    }

    let clock = Instant::now();
    let mut cost = eval(&perm);
    let mut evaluations = 1u64;
    let mut trace = config.record_trace.then(|| vec![(1u64, cost)]);

    while evaluations < config.budget {
        if let Some(limit) = config.time_limit {
            if clock.elapsed() >= limit {
                break;
            }
        }
        if n < 3 {
            // no non-trivial neighbor exists; the budget is still spent
            evaluations = config.budget;
            break;
        }
        let (i, j) = draw_positions(n, config.mutation, &mut rng);
        apply_mutation(&mut perm, config.mutation, i, j);
        let cand = eval(&perm);
        evaluations += 1;
        if cand <= cost {
            if cand < cost {
                if let Some(t) = trace.as_mut() {
                    t.push((evaluations, cand));
                }
            }
            cost = cand;
        } else {
            undo_mutation(&mut perm, config.mutation, i, j);
        }
    }

    Ok(RlsResult {
        best_tour: Tour::new(perm)?,
        best_cost: cost,
        evaluations_used: evaluations,
        trace,
    })
}

/// Relative deviation of a cost from the best known cost, in percent.
pub fn perf(cost: f64, best_known_cost: f64) -> Result<f64> {
    if best_known_cost.is_nan() || best_known_cost <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "best known cost must be positive, got {best_known_cost}"
        )));
    }
    Ok((cost / best_known_cost - 1.0) * 100.0)
}
