//! Rank statistics for the experiment protocol: one-sided
//! Mann-Whitney U tests (exact for small tie-free samples, normal
//! approximation with tie correction otherwise) and the perf aggregation
//! with Bonferroni-adjusted pairwise comparisons.

use super::ResultRow;
use crate::core::{Error, Result};
use crate::heuristics::perf;
use std::collections::BTreeMap;

/// Both groups at most this large (and tie-free) use the exact null
/// distribution of U.
pub const MWU_EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MwuMethod {
    Exact,
    NormalApprox,
}

/// One-sided Mann-Whitney result for the hypothesis "a is stochastically
/// smaller than b".
#[derive(Debug, Clone)]
pub struct MannWhitney {
    /// U statistic of sample `a`.
    pub u: f64,
    /// One-sided p-value for `a < b`.
    pub p_less: f64,
    pub method: MwuMethod,
}

/// One-sided Mann-Whitney U test of `a < b`. Smaller values rank lower, so
/// small `U` favors the hypothesis.
pub fn mann_whitney_u_less(a: &[f64], b: &[f64]) -> Result<MannWhitney> {
    let n = a.len();
    let m = b.len();
    if n == 0 || m == 0 {
        return Err(Error::InvalidParam("Mann-Whitney requires nonempty samples".into()));
    }
    let mut pooled: Vec<(f64, usize)> = a
        .iter()
        .map(|&v| (v, 0usize))
        .chain(b.iter().map(|&v| (v, 1usize)))
        .collect();
    if pooled.iter().any(|(v, _)| v.is_nan()) {
        return Err(Error::InvalidParam("Mann-Whitney input contains NaN".into()));
    }
    pooled.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("no NaN"));

    // midranks and the tie correction term sum(t^3 - t)
    let total = n + m;
    let mut ranks = vec![0.0; total];
    let mut tie_term = 0.0;
    let mut has_ties = false;
    let mut i = 0;
    while i < total {
        let mut j = i + 1;
        while j < total && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        let t = j - i;
        if t > 1 {
            has_ties = true;
            tie_term += (t * t * t - t) as f64;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        for r in ranks.iter_mut().take(j).skip(i) {
            *r = rank;
        }
        i = j;
    }
    let r_a: f64 = pooled
        .iter()
        .zip(&ranks)
        .filter(|((_, g), _)| *g == 0)
        .map(|(_, &r)| r)
        .sum();
    let u = r_a - (n * (n + 1)) as f64 / 2.0;

    if !has_ties && n <= MWU_EXACT_LIMIT && m <= MWU_EXACT_LIMIT {
        let p = exact_p_leq(u.round() as usize, n, m);
        return Ok(MannWhitney { u, p_less: p, method: MwuMethod::Exact });
    }

    let nm = (n * m) as f64;
    let nf = total as f64;
    let variance = nm / 12.0 * ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
    if variance <= 0.0 {
        // all observations identical
        return Ok(MannWhitney { u, p_less: 1.0, method: MwuMethod::NormalApprox });
    }
    let z = (u - nm / 2.0 + 0.5) / variance.sqrt();
    Ok(MannWhitney { u, p_less: normal_cdf(z), method: MwuMethod::NormalApprox })
}

/// P(U <= u) under the exact tie-free null distribution, by the standard
/// count recurrence ways(n, m, u) = ways(n-1, m, u-m) + ways(n, m-1, u).
fn exact_p_leq(u_obs: usize, n: usize, m: usize) -> f64 {
    let max_u = n * m;
    let u_obs = u_obs.min(max_u);
    // ways[i][j][u], flattened over u
    let mut ways = vec![vec![vec![0.0f64; max_u + 1]; m + 1]; n + 1];
    for row in ways.iter_mut() {
        for cell in row.iter_mut() {
            cell[0] = 1.0;
        }
    }
    for i in 1..=n {
        for j in 1..=m {
            for u in 1..=max_u {
                let skip = ways[i][j - 1][u];
                let take = if u >= j { ways[i - 1][j][u - j] } else { 0.0 };
                ways[i][j][u] = skip + take;
            }
        }
    }
    // binomial(n + m, n) via the same table: total mass
    let total: f64 = ways[n][m].iter().sum();
    let below: f64 = ways[n][m][..=u_obs].iter().sum();
    below / total
}

/// Standard normal CDF via the Abramowitz-Stegun erf approximation
/// (absolute error below 1.5e-7, ample for p-values).
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}

fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let y = 1.0
        - (((((1.061405429 * t - 1.453152027) * t) + 1.421413741) * t - 0.284496736) * t
            + 0.254829592)
            * t
            * (-x * x).exp();
    sign * y
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n - 1 denominator).
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mu = mean(xs);
    (xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Median of a sample (mean of the middle pair for even sizes).
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// (q1, median, q3) by Tukey hinges: medians of the lower and upper halves
/// (middle element shared for odd sizes).
pub fn quartiles(xs: &[f64]) -> (f64, f64, f64) {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let n = v.len();
    let med = median(&v);
    if n == 1 {
        return (v[0], med, v[0]);
    }
    let half = n / 2;
    let lower = &v[..half + n % 2];
    let upper = &v[half..];
    (median(lower), med, median(upper))
}

/// One per-run perf observation.
#[derive(Debug, Clone)]
pub struct PerfRow {
    pub instance: String,
    pub class: String,
    pub d: String,
    pub algorithm: String,
    pub fitness: String,
    pub run: u32,
    pub perf: f64,
}

/// One pairwise one-sided comparison within a (class, d) group.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub other: String,
    /// Bonferroni-adjusted one-sided p-value (multiplied by the number of
    /// ordered comparisons in the group, capped at 1).
    pub p_adjusted: f64,
    pub significant: bool,
}

/// Aggregated perf of one algorithm in one (class, d) group.
#[derive(Debug, Clone)]
pub struct PerfCell {
    pub class: String,
    pub d: String,
    pub algorithm: String,
    pub fitness: String,
    pub samples: usize,
    pub mean: f64,
    pub std: f64,
    pub median: f64,
    pub comparisons: Vec<Comparison>,
}

pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

/// Per-row perf values: the reference cost of an instance is the best
/// weighted cost over all runs of all algorithms on it.
pub fn compute_perf_rows(rows: &[ResultRow]) -> Result<Vec<PerfRow>> {
    let mut best: BTreeMap<&str, f64> = BTreeMap::new();
    for row in rows {
        let e = best.entry(row.instance.as_str()).or_insert(f64::INFINITY);
        if row.weighted < *e {
            *e = row.weighted;
        }
    }
    rows.iter()
        .map(|row| {
            let reference = best[row.instance.as_str()];
            Ok(PerfRow {
                instance: row.instance.clone(),
                class: row.class.clone(),
                d: row.d.clone(),
                algorithm: row.algorithm.clone(),
                fitness: row.fitness.clone(),
                run: row.run,
                perf: perf(row.weighted, reference)?,
            })
        })
        .collect()
}

/// Aggregates perf per (class, d, algorithm, fitness) and runs the pairwise
/// one-sided Mann-Whitney tests within each (class, d) group.
pub fn compute_perf_table(rows: &[ResultRow]) -> Result<(Vec<PerfRow>, Vec<PerfCell>)> {
    let perf_rows = compute_perf_rows(rows)?;
    if perf_rows.is_empty() {
        return Err(Error::InvalidParam("no result rows to aggregate".into()));
    }

    type CellKey = (String, String, String, String);
    let mut groups: BTreeMap<CellKey, Vec<f64>> = BTreeMap::new();
    for r in &perf_rows {
        groups
            .entry((r.class.clone(), r.d.clone(), r.algorithm.clone(), r.fitness.clone()))
            .or_default()
            .push(r.perf);
    }

    let mut cells = Vec::with_capacity(groups.len());
    for ((class, d, algorithm, fitness), perfs) in &groups {
        let peers: Vec<(&CellKey, &Vec<f64>)> = groups
            .iter()
            .filter(|((c, dd, a, f), _)| {
                c == class && dd == d && !(a == algorithm && f == fitness)
            })
            .collect();
        let n_comparisons = (peers.len() + 1) * peers.len();
        let mut comparisons = Vec::with_capacity(peers.len());
        for ((_, _, other_alg, other_fit), other_perfs) in peers {
            let test = mann_whitney_u_less(perfs, other_perfs)?;
            let p_adjusted = (test.p_less * n_comparisons.max(1) as f64).min(1.0);
            comparisons.push(Comparison {
                other: label(other_alg, other_fit),
                p_adjusted,
                significant: p_adjusted < SIGNIFICANCE_LEVEL,
            });
        }
        cells.push(PerfCell {
            class: class.clone(),
            d: d.clone(),
            algorithm: algorithm.clone(),
            fitness: fitness.clone(),
            samples: perfs.len(),
            mean: mean(perfs),
            std: std_dev(perfs),
            median: median(perfs),
            comparisons,
        });
    }
    Ok((perf_rows, cells))
}

fn label(algorithm: &str, fitness: &str) -> String {
    format!("{algorithm}/{fitness}")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Permutation oracle: exact P(U <= u_obs) by enumerating every
    /// assignment of group labels to the pooled observations.
    fn enumerated_p(a: &[f64], b: &[f64]) -> f64 {
        let pooled: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
        let total = pooled.len();
        let n = a.len();
        // U counts the pairs where the first sample exceeds the second
        let u_of = |xs: &[f64], ys: &[f64]| -> f64 {
            let mut u = 0.0;
            for x in xs {
                for y in ys {
                    if x > y {
                        u += 1.0;
                    } else if x == y {
                        u += 0.5;
                    }
                }
            }
            u
        };
        let u_obs = u_of(a, b);
        let mut count = 0u64;
        let mut favorable = 0u64;
        for mask in 0u32..(1 << total) {
            if mask.count_ones() as usize != n {
                continue;
            }
            let mut xs = Vec::with_capacity(n);
            let mut ys = Vec::with_capacity(total - n);
            for (i, &v) in pooled.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    xs.push(v);
                } else {
                    ys.push(v);
                }
            }
            count += 1;
            if u_of(&xs, &ys) <= u_obs + 1e-12 {
                favorable += 1;
            }
        }
        favorable as f64 / count as f64
    }

    #[test]
    fn exact_p_matches_enumeration_on_small_samples() {
        let cases: Vec<(Vec<f64>, Vec<f64>)> = vec![
            (vec![1.0, 2.0, 5.0], vec![3.0, 4.0, 6.0, 7.0]),
            (vec![10.0, 20.0], vec![1.0, 2.0, 3.0]),
            (vec![1.0, 4.0, 6.0, 8.0], vec![2.0, 3.0, 5.0, 7.0]),
            (vec![0.5, 1.5, 2.5, 3.5, 9.0], vec![4.0, 5.0, 6.0]),
            (
                vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
                vec![1.5, 2.5, 3.5, 4.5, 5.5, 6.5, 7.5, 8.5],
            ),
        ];
        for (a, b) in cases {
            let got = mann_whitney_u_less(&a, &b).unwrap();
            assert_eq!(got.method, MwuMethod::Exact);
            let want = enumerated_p(&a, &b);
            assert!(
                (got.p_less - want).abs() < 1e-12,
                "exact p {} vs enumerated {} for {a:?} vs {b:?}",
                got.p_less,
                want
            );
        }
    }

    #[test]
    fn identical_samples_are_not_significant() {
        let a = vec![5.0, 6.0, 7.0, 8.0, 9.0];
        let res = mann_whitney_u_less(&a, &a).unwrap();
        assert!(res.p_less > 0.4, "p = {}", res.p_less);
    }

    #[test]
    fn clearly_separated_samples_are_significant() {
        let a: Vec<f64> = (0..30).map(|i| i as f64 / 10.0).collect();
        let b: Vec<f64> = (0..30).map(|i| 100.0 + i as f64).collect();
        let res = mann_whitney_u_less(&a, &b).unwrap();
        assert!(res.p_less < 0.05 / 6.0, "p = {}", res.p_less);
        // and the reversed direction is hopeless
        let rev = mann_whitney_u_less(&b, &a).unwrap();
        assert!(rev.p_less > 0.95);
    }

    #[test]
    fn ties_fall_back_to_the_corrected_normal_approximation() {
        let a = vec![1.0, 1.0, 1.0, 2.0];
        let b = vec![1.0, 2.0, 2.0, 2.0];
        let res = mann_whitney_u_less(&a, &b).unwrap();
        assert_eq!(res.method, MwuMethod::NormalApprox);
        assert!(res.p_less.is_finite());
        assert!((0.0..=1.0).contains(&res.p_less));

        let constant = vec![3.0; 25];
        let res = mann_whitney_u_less(&constant, &constant).unwrap();
        assert_eq!(res.p_less, 1.0);
    }

    #[test]
    fn large_samples_use_the_normal_path() {
        let a: Vec<f64> = (0..40).map(|i| (i as f64).sin() + i as f64 * 0.01).collect();
        let b: Vec<f64> = (0..40).map(|i| (i as f64).cos() + i as f64 * 0.011).collect();
        let res = mann_whitney_u_less(&a, &b).unwrap();
        assert_eq!(res.method, MwuMethod::NormalApprox);
        assert!((0.0..=1.0).contains(&res.p_less));
    }

    #[test]
    fn normal_cdf_reference_values() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-9);
        assert!((normal_cdf(1.959964) - 0.975).abs() < 1e-6);
        assert!((normal_cdf(-1.959964) - 0.025).abs() < 1e-6);
        assert!(normal_cdf(-8.0) < 1e-14);
    }

    #[test]
    fn summary_statistics() {
        let xs = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(mean(&xs), 2.5);
        assert_eq!(median(&xs), 2.5);
        let (q1, med, q3) = quartiles(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        assert_eq!((q1, med, q3), (2.5, 4.5, 6.5));
        assert!((std_dev(&xs) - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(std_dev(&[7.0]), 0.0);
    }

    #[test]
    fn empty_samples_are_rejected() {
        assert!(mann_whitney_u_less(&[], &[1.0]).is_err());
        assert!(mann_whitney_u_less(&[1.0], &[]).is_err());
    }
}
