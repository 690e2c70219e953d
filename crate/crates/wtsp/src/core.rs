//! Domain types and cost functionals for the node weight dependent TSP.
//!
//! A tour `(p_1, ..., p_n)` starting at a fixed city is charged, for every
//! edge it traverses, the edge distance times the total weight of the cities
//! visited before crossing that edge:
//!
//! ```text
//! W(p) = d(p_n, p_1) * omega(n) + sum_{i=1}^{n-1} d(p_i, p_{i+1}) * omega(i)
//! ```
//!
//! where `omega(i)` is the weight of the first `i` cities. The classical TSP
//! is the special case `w = (1, 0, ..., 0)`; latency (the minimum latency /
//! traveling repairman objective) is closely tied to `W` through tour
//! reversal, see [`latency_cost`].

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Instances must contain at least one city.
    EmptyInstance,
    DimensionMismatch { expected: usize, found: usize },
    InvalidTour(String),
    CityNotFound(usize),
    AsymmetricDistance(usize, usize),
    NonzeroDiagonal(usize),
    NegativeDistance(usize, usize),
    NegativeWeight(usize),
    /// Triangle inequality violated by the witness triple (a, b, c).
    TriangleViolation(usize, usize, usize),
    /// The operation requires an instance whose metric flag is set.
    MetricRequired,
    /// Instance size exceeds the hard cap of an exact algorithm.
    SizeCap { n: usize, cap: usize },
    /// Weight expansion requires positive integer weights.
    NonIntegerWeight { city: usize, weight: f64 },
    /// A k-tour family is missing the tour for this k.
    MissingTour(usize),
    /// A walk or copy map does not cover this city.
    MissingCity(usize),
    InvalidParam(String),
    Parse { line: usize, msg: String },
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyInstance => write!(f, "instance must have at least one city"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidTour(msg) => write!(f, "invalid tour: {msg}"),
            Error::CityNotFound(c) => write!(f, "city {c} not present"),
            Error::AsymmetricDistance(a, b) => {
                write!(f, "distance matrix not symmetric at ({a}, {b})")
            }
            Error::NonzeroDiagonal(a) => write!(f, "distance matrix has d({a},{a}) != 0"),
            Error::NegativeDistance(a, b) => write!(f, "negative distance at ({a}, {b})"),
            Error::NegativeWeight(c) => write!(f, "negative weight at city {c}"),
            Error::TriangleViolation(a, b, c) => {
                write!(f, "triangle inequality violated: d({a},{c}) > d({a},{b}) + d({b},{c})")
            }
            Error::MetricRequired => write!(f, "operation requires a metric instance"),
            Error::SizeCap { n, cap } => {
                write!(f, "instance size {n} exceeds the cap of {cap} for this solver")
            }
            Error::NonIntegerWeight { city, weight } => {
                write!(f, "city {city} has weight {weight}; positive integer required")
            }
            Error::MissingTour(k) => write!(f, "k-tour family has no tour for k = {k}"),
            Error::MissingCity(c) => write!(f, "city {c} is not covered"),
            Error::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Distance representation of an instance.
#[derive(Debug, Clone)]
pub enum Distances {
    /// Points in the plane; distances computed on demand. With `rounded`
    /// set, distances follow the classical TSPLIB EUC_2D convention of
    /// rounding to the nearest integer (off by default, the cost model
    /// assumes exact distances).
    Euclidean { coords: Vec<(f64, f64)>, rounded: bool },
    /// Explicit symmetric matrix, row-major `n * n`.
    Explicit { n: usize, matrix: Vec<f64> },
}

/// A W-TSP instance: cities, symmetric distances, nonnegative node weights
/// and a fixed start city. Immutable after construction; cheap to share.
#[derive(Debug, Clone)]
pub struct Instance {
    name: String,
    distances: Distances,
    weights: Vec<f64>,
    start: usize,
    metric: bool,
}

/// Triples are checked exhaustively up to this size, sampled above.
const METRIC_AUDIT_EXHAUSTIVE_CAP: usize = 200;
const METRIC_AUDIT_SAMPLES: usize = 200_000;
/// Slack for metric audits on floating-point data.
const METRIC_EPS: f64 = 1e-9;

impl Instance {
    /// Euclidean instance with exact (unrounded) distances. Always metric.
    pub fn euclidean(
        name: impl Into<String>,
        coords: Vec<(f64, f64)>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        Self::euclidean_with_rounding(name, coords, weights, false)
    }

    /// Euclidean instance, optionally rounding each distance to the nearest
    /// integer (TSPLIB EUC_2D interoperability). Rounding can break the
    /// triangle inequality, so the metric flag is re-audited in that case.
    pub fn euclidean_with_rounding(
        name: impl Into<String>,
        coords: Vec<(f64, f64)>,
        weights: Vec<f64>,
        rounded: bool,
    ) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyInstance);
        }
        if coords.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: coords.len(), found: weights.len() });
        }
        check_weights(&weights)?;
        let mut inst = Instance {
            name: name.into(),
            distances: Distances::Euclidean { coords, rounded },
            weights,
            start: 0,
            metric: true,
        };
        if rounded {
            inst.metric = inst.audit_metric(0x5eed).is_ok();
        }
        Ok(inst)
    }

    /// Instance over an explicit symmetric matrix. Symmetry, zero diagonal
    /// and nonnegativity are always validated; if `metric` is claimed the
    /// triangle inequality is audited as well (exhaustively for n <= 200).
    pub fn explicit(
        name: impl Into<String>,
        matrix: Vec<Vec<f64>>,
        weights: Vec<f64>,
        metric: bool,
    ) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::EmptyInstance);
        }
        if weights.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: weights.len() });
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &matrix {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            flat.extend_from_slice(row);
        }
        check_weights(&weights)?;
        for i in 0..n {
            if flat[i * n + i] != 0.0 {
                return Err(Error::NonzeroDiagonal(i));
            }
            for j in (i + 1)..n {
                let d = flat[i * n + j];
                if d < 0.0 {
                    return Err(Error::NegativeDistance(i, j));
                }
                if d != flat[j * n + i] {
                    return Err(Error::AsymmetricDistance(i, j));
                }
            }
        }
        let inst = Instance {
            name: name.into(),
            distances: Distances::Explicit { n, matrix: flat },
            weights,
            start: 0,
            metric,
        };
        if metric {
            inst.audit_metric(0x5eed)?;
        }
        Ok(inst)
    }

    /// Same instance with a different start city.
    pub fn with_start(mut self, start: usize) -> Result<Self> {
        if start >= self.n() {
            return Err(Error::CityNotFound(start));
        }
        self.start = start;
        Ok(self)
    }

    /// Same distances, different weights. Used e.g. to reduce classical TSP
    /// to the weighted solver via `w = (1, 0, ..., 0)`.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: weights.len() });
        }
        check_weights(&weights)?;
        let mut inst = self.clone();
        inst.weights = weights;
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        match &self.distances {
            Distances::Euclidean { coords, .. } => coords.len(),
            Distances::Explicit { n, .. } => *n,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, city: usize) -> f64 {
        self.weights[city]
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_metric(&self) -> bool {
        self.metric
    }

    pub fn distances(&self) -> &Distances {
        &self.distances
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        match &self.distances {
            Distances::Euclidean { coords, .. } => Some(coords),
            Distances::Explicit { .. } => None,
        }
    }

    pub fn has_unit_weights(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        match &self.distances {
            Distances::Euclidean { coords, rounded } => {
                if a == b {
                    return 0.0;
                }
                let (xa, ya) = coords[a];
                let (xb, yb) = coords[b];
                let d = ((xa - xb).powi(2) + (ya - yb).powi(2)).sqrt();
                if *rounded {
                    (d + 0.5).floor()
                } else {
                    d
                }
            }
            Distances::Explicit { n, matrix } => matrix[a * n + b],
        }
    }

    /// Verifies `d(a,c) <= d(a,b) + d(b,c)`, exhaustively for n <= 200 and on
    /// seeded random triples above. Returns the first violating triple.
    pub fn audit_metric(&self, seed: u64) -> Result<()> {
        let n = self.n();
        if n <= METRIC_AUDIT_EXHAUSTIVE_CAP {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        self.check_triple(a, b, c)?;
                    }
                }
            }
        } else {
            let mut state = seed | 1;
            // xorshift is enough for picking audit triples
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state
            };
            for _ in 0..METRIC_AUDIT_SAMPLES {
                let a = (next() % n as u64) as usize;
                let b = (next() % n as u64) as usize;
                let c = (next() % n as u64) as usize;
                self.check_triple(a, b, c)?;
            }
        }
        Ok(())
    }

    fn check_triple(&self, a: usize, b: usize, c: usize) -> Result<()> {
        let lhs = self.distance(a, c);
        let rhs = self.distance(a, b) + self.distance(b, c);
        if lhs > rhs + METRIC_EPS * (1.0 + lhs.abs()) {
            return Err(Error::TriangleViolation(a, b, c));
        }
        Ok(())
    }
}

fn check_weights(weights: &[f64]) -> Result<()> {
    for (i, &w) in weights.iter().enumerate() {
        if w.is_nan() || w < 0.0 {
            return Err(Error::NegativeWeight(i));
        }
    }
    Ok(())
}

/// Materialized distance matrix for hot loops (the on-demand Euclidean
/// distance costs a sqrt per lookup).
#[derive(Debug, Clone)]
pub struct DistMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistMatrix {
    pub fn new(instance: &Instance) -> Self {
        let n = instance.n();
        let mut d = vec![0.0; n * n];
        for a in 0..n {
            for b in (a + 1)..n {
                let v = instance.distance(a, b);
                d[a * n + b] = v;
                d[b * n + a] = v;
            }
        }
        DistMatrix { n, d }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.d[a * self.n + b]
    }
}

/// A Hamiltonian tour, stored as a permutation of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour {
    perm: Vec<usize>,
}

impl Tour {
    /// Validates that `perm` is a bijection on `0..perm.len()`.
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        if n == 0 {
            return Err(Error::InvalidTour("empty permutation".into()));
        }
        let mut seen = vec![false; n];
        for &c in &perm {
            if c >= n {
                return Err(Error::InvalidTour(format!("city {c} out of range 0..{n}")));
            }
            if seen[c] {
                return Err(Error::InvalidTour(format!("city {c} appears twice")));
            }
            seen[c] = true;
        }
        Ok(Tour { perm })
    }

    pub fn identity(n: usize) -> Self {
        Tour { perm: (0..n).collect() }
    }

    pub fn cities(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.perm
    }

    /// The reverse tour `(p_1, p_n, p_{n-1}, ..., p_2)`: first city fixed,
    /// remainder reversed. Involution.
    pub fn reversed(&self) -> Tour {
        let mut perm = self.perm.clone();
        perm[1..].reverse();
        Tour { perm }
    }

    /// Rotates the tour so that `start` comes first. Rotation preserves the
    /// classical cycle length but not in general the weighted cost, so costs
    /// must be evaluated after normalization.
    pub fn normalized(&self, start: usize) -> Result<Tour> {
        let pos = self
            .perm
            .iter()
            .position(|&c| c == start)
            .ok_or(Error::CityNotFound(start))?;
        let mut perm = Vec::with_capacity(self.perm.len());
        perm.extend_from_slice(&self.perm[pos..]);
        perm.extend_from_slice(&self.perm[..pos]);
        Ok(Tour { perm })
    }
}

impl fmt::Display for Tour {
    /// Cities are displayed 1-based, matching the instance file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &c in &self.perm {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}", c + 1)?;
            first = false;
        }
        Ok(())
    }
}

/// The three objective values of one tour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostReport {
    /// Weighted cost W.
    pub weighted: f64,
    /// Classical cycle length.
    pub tsp: f64,
    /// Latency of the path (no closing edge).
    pub latency: f64,
}

/// Prefix weight sums `omega[i] = w(p_1) + ... + w(p_{i+1})` (0-based index).
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixWeights {
    omega: Vec<f64>,
}

impl PrefixWeights {
    /// `omega(i)` with the 1-based index of the cost formula.
    pub fn omega(&self, i: usize) -> f64 {
        self.omega[i - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.omega
    }

    pub fn total(&self) -> f64 {
        *self.omega.last().expect("nonempty by construction")
    }
}

fn check_pair(instance: &Instance, tour: &Tour) -> Result<()> {
    if tour.len() != instance.n() {
        return Err(Error::DimensionMismatch { expected: instance.n(), found: tour.len() });
    }
    Ok(())
}

/// Weighted tour cost `W`: every edge is charged the cumulative weight of
/// the cities visited before traversing it; the closing edge carries the
/// full weight. O(n).
pub fn weighted_cost(instance: &Instance, tour: &Tour) -> Result<f64> {
    check_pair(instance, tour)?;
    Ok(weighted_cost_on(&|a, b| instance.distance(a, b), instance.weights(), tour.cities()))
}

/// Classical cycle length of the tour.
pub fn tsp_cost(instance: &Instance, tour: &Tour) -> Result<f64> {
    check_pair(instance, tour)?;
    Ok(tsp_cost_on(&|a, b| instance.distance(a, b), tour.cities()))
}

/// Path length `d(p_1,p_2) + ... + d(p_{n-1},p_n)` without the closing edge.
pub fn tsp_path_cost(instance: &Instance, tour: &Tour) -> Result<f64> {
    check_pair(instance, tour)?;
    let p = tour.cities();
    Ok(p.windows(2).map(|e| instance.distance(e[0], e[1])).sum())
}

/// Latency of the path `(p_1, ..., p_n)`: the sum over cities of the
/// distance traveled before reaching them. Every edge `(p_i, p_{i+1})` is
/// still ahead of `n - i` cities, so the double sum collapses to a single
/// O(n) pass.
pub fn latency_cost(instance: &Instance, tour: &Tour) -> Result<f64> {
    check_pair(instance, tour)?;
    let p = tour.cities();
    let n = p.len();
    let mut total = 0.0;
    for i in 0..n.saturating_sub(1) {
        total += (n - 1 - i) as f64 * instance.distance(p[i], p[i + 1]);
    }
    Ok(total)
}

/// All three objective values of a tour in one pass.
pub fn cost_report(instance: &Instance, tour: &Tour) -> Result<CostReport> {
    Ok(CostReport {
        weighted: weighted_cost(instance, tour)?,
        tsp: tsp_cost(instance, tour)?,
        latency: latency_cost(instance, tour)?,
    })
}

/// Prefix weight sums along the tour. Nondecreasing; the total is
/// permutation independent.
pub fn prefix_weights(instance: &Instance, tour: &Tour) -> Result<PrefixWeights> {
    check_pair(instance, tour)?;
    let mut omega = Vec::with_capacity(tour.len());
    let mut acc = 0.0;
    for &c in tour.cities() {
        acc += instance.weight(c);
        omega.push(acc);
    }
    Ok(PrefixWeights { omega })
}

/// Unchecked fast path used by solvers: weighted cost from a materialized
/// distance matrix and weight slice.
#[inline]
pub fn weighted_cost_fast(dist: &DistMatrix, weights: &[f64], perm: &[usize]) -> f64 {
    let n = perm.len();
    if n <= 1 {
        return 0.0;
    }
    let mut acc = weights[perm[0]];
    let mut total = 0.0;
    for i in 0..n - 1 {
        total += dist.get(perm[i], perm[i + 1]) * acc;
        acc += weights[perm[i + 1]];
    }
    total + dist.get(perm[n - 1], perm[0]) * acc
}

/// Unchecked fast path: classical cycle length from a distance matrix.
#[inline]
pub fn tsp_cost_fast(dist: &DistMatrix, perm: &[usize]) -> f64 {
    let n = perm.len();
    if n <= 1 {
        return 0.0;
    }
    let mut total = dist.get(perm[n - 1], perm[0]);
    for i in 0..n - 1 {
        total += dist.get(perm[i], perm[i + 1]);
    }
    total
}

fn weighted_cost_on(dist: &dyn Fn(usize, usize) -> f64, weights: &[f64], perm: &[usize]) -> f64 {
    let n = perm.len();
    if n <= 1 {
        return 0.0;
    }
    let mut acc = weights[perm[0]];
    let mut total = 0.0;
    for i in 0..n - 1 {
        total += dist(perm[i], perm[i + 1]) * acc;
        acc += weights[perm[i + 1]];
    }
    total + dist(perm[n - 1], perm[0]) * acc
}

fn tsp_cost_on(dist: &dyn Fn(usize, usize) -> f64, perm: &[usize]) -> f64 {
    let n = perm.len();
    if n <= 1 {
        return 0.0;
    }
    let mut total = dist(perm[n - 1], perm[0]);
    for i in 0..n - 1 {
        total += dist(perm[i], perm[i + 1]);
    }
    total
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    /// Triangle from the latency discussion: d(1,2) = eps, d(2,3) = x,
    /// d(1,3) = x (1-based labels).
    pub fn triangle(x: f64, eps: f64, weights: Vec<f64>) -> Instance {
        Instance::explicit(
            "triangle",
            vec![
                vec![0.0, eps, x],
                vec![eps, 0.0, x],
                vec![x, x, 0.0],
            ],
            weights,
            true,
        )
        .unwrap()
    }

    pub fn random_metric_instance(n: usize, rng: &mut ChaCha8Rng, unit: bool) -> Instance {
        let coords: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.gen_range(0..=1000) as f64, rng.gen_range(0..=1000) as f64))
            .collect();
        let weights = if unit {
            vec![1.0; n]
        } else {
            let mut w: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=5) as f64).collect();
            w[0] = 1.0;
            w
        };
        Instance::euclidean("rand", coords, weights).unwrap()
    }

    pub fn random_tour(n: usize, rng: &mut ChaCha8Rng) -> Tour {
        let mut perm: Vec<usize> = (0..n).collect();
        // Fisher-Yates over the whole permutation
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        Tour::new(perm).unwrap()
    }
}
