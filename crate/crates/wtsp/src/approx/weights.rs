//! Reduction from bounded positive integer weights to unit weights: each
//! city `i` becomes `w(i)` copies at mutual distance zero, inheriting the
//! original distances to all other cities. Metricity is preserved, any
//! original tour block-substitutes to an expanded tour of equal weighted
//! cost, and an expanded tour collapses back (grouping copies at their last
//! occurrence) to an original tour of the same or smaller cost.
//!
//! The collapse guarantee rests on the start city having a single copy,
//! which the weight protocol ensures (`w(start) = 1`). With a heavier start
//! city its copies are anchored to the front instead, keeping tours valid,
//! but the cost may then exceed the expanded one.

use crate::core::{Distances, Error, Instance, Result, Tour};

/// Cap on the total weight (the expanded city count).
pub const EXPANSION_CAP: usize = 4000;

/// Exact integer expected of every weight passed to [`expand_weights`].
const INTEGER_EPS: f64 = 1e-9;

/// Mapping between an instance and its unit-weight expansion.
#[derive(Debug, Clone)]
pub struct CopyMap {
    copy_to_original: Vec<usize>,
    offsets: Vec<usize>,
    counts: Vec<usize>,
}

impl CopyMap {
    pub fn expanded_n(&self) -> usize {
        self.copy_to_original.len()
    }

    pub fn original_n(&self) -> usize {
        self.counts.len()
    }

    pub fn original_of(&self, copy: usize) -> usize {
        self.copy_to_original[copy]
    }

    /// Copies of an original city, contiguous by construction.
    pub fn copies_of(&self, original: usize) -> std::ops::Range<usize> {
        self.offsets[original]..self.offsets[original] + self.counts[original]
    }

    pub fn count_of(&self, original: usize) -> usize {
        self.counts[original]
    }
}

/// Expands an instance with positive integer weights into an all-unit
/// instance with `sum w(i)` cities. Copies of one city sit at distance zero
/// from each other; distances between copies of different cities equal the
/// original distance. Rejects zero or fractional weights.
pub fn expand_weights(instance: &Instance) -> Result<(Instance, CopyMap)> {
    let n = instance.n();
    let mut counts = Vec::with_capacity(n);
    let mut total = 0usize;
    for (city, &w) in instance.weights().iter().enumerate() {
        let rounded = w.round();
        if (w - rounded).abs() > INTEGER_EPS || rounded < 1.0 {
            return Err(Error::NonIntegerWeight { city, weight: w });
        }
        let count = rounded as usize;
        counts.push(count);
        total += count;
    }
    if total > EXPANSION_CAP {
        return Err(Error::SizeCap { n: total, cap: EXPANSION_CAP });
    }

    let mut offsets = Vec::with_capacity(n);
    let mut copy_to_original = Vec::with_capacity(total);
    for (city, &count) in counts.iter().enumerate() {
        offsets.push(copy_to_original.len());
        copy_to_original.extend(std::iter::repeat_n(city, count));
    }
    let map = CopyMap { copy_to_original, offsets, counts };

    let name = format!("{}-expanded", instance.name());
    let unit = vec![1.0; total];
    let expanded = match instance.distances() {
        Distances::Euclidean { coords, rounded } => {
            // copies share the original coordinates, so intra-copy
            // distances vanish without an explicit matrix
            let repeated: Vec<(f64, f64)> =
                map.copy_to_original.iter().map(|&c| coords[c]).collect();
            Instance::euclidean_with_rounding(name, repeated, unit, *rounded)?
        }
        Distances::Explicit { .. } => {
            let mut matrix = vec![vec![0.0; total]; total];
            for a in 0..total {
                for b in 0..total {
                    let (oa, ob) = (map.copy_to_original[a], map.copy_to_original[b]);
                    matrix[a][b] = if oa == ob { 0.0 } else { instance.distance(oa, ob) };
                }
            }
            Instance::explicit(name, matrix, unit, instance.is_metric())?
        }
    };
    let expanded = expanded.with_start(map.offsets[instance.start()])?;
    Ok((expanded, map))
}

/// Translates an original tour to the expanded instance by replacing each
/// city with its block of copies. The weighted costs agree exactly.
pub fn block_substitute(tour: &Tour, map: &CopyMap) -> Result<Tour> {
    if tour.len() != map.original_n() {
        return Err(Error::DimensionMismatch {
            expected: map.original_n(),
            found: tour.len(),
        });
    }
    let mut perm = Vec::with_capacity(map.expanded_n());
    for &city in tour.cities() {
        perm.extend(map.copies_of(city));
    }
    Tour::new(perm)
}

/// Extracts an original-instance tour from an expanded-instance tour by
/// visiting every city at the position of its last copy (a reverse scan
/// skipping duplicates); the start city stays in front. On metric instances
/// with a single start copy the weighted cost never increases.
pub fn collapse_tour(
    expanded_tour: &Tour,
    map: &CopyMap,
    original: &Instance,
) -> Result<Tour> {
    if expanded_tour.len() != map.expanded_n() {
        return Err(Error::DimensionMismatch {
            expected: map.expanded_n(),
            found: expanded_tour.len(),
        });
    }
    if original.n() != map.original_n() {
        return Err(Error::DimensionMismatch {
            expected: map.original_n(),
            found: original.n(),
        });
    }
    let start = original.start();
    if map.original_of(expanded_tour.cities()[0]) != start {
        return Err(Error::InvalidTour(
            "expanded tour must begin at a copy of the start city".into(),
        ));
    }
    let mut seen = vec![false; map.original_n()];
    let mut rev_order = Vec::with_capacity(map.original_n());
    for &copy in expanded_tour.cities().iter().rev() {
        let city = map.original_of(copy);
        if !seen[city] {
            seen[city] = true;
            rev_order.push(city);
        }
    }
    rev_order.reverse();
    if rev_order[0] != start {
        // only reachable when the start city has several copies
        let pos = rev_order.iter().position(|&c| c == start).expect("start was seen");
        rev_order.remove(pos);
        rev_order.insert(0, start);
    }
    Tour::new(rev_order)
}
