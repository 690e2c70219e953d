//! Classical TSP tour construction used as the n-tour of the concatenation
//! scheme: spanning-tree doubling (factor 2) and Christofides-style
//! tree-plus-matching (factor 1.5 while the odd-degree matching is exact).

use crate::core::{DistMatrix, Error, Instance, Result, Tour};

/// Odd-degree sets up to this size get an exact minimum-weight perfect
/// matching by subset DP; larger sets fall back to greedy matching and the
/// 1.5 guarantee is lost (see [`ConstructedTour::guaranteed`]).
pub const MATCHING_EXACT_CAP: usize = 12;

/// Which construction the TSP subroutine runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TspMode {
    /// Double every MST edge, walk the Euler tour, shortcut. Tour length is
    /// at most twice the optimal cycle.
    DoubleTree,
    /// MST plus a perfect matching on the odd-degree vertices, Euler tour,
    /// shortcut.
    Christofides,
}

/// A constructed tour together with whether its approximation guarantee
/// held (it does not when the greedy matching fallback was used).
#[derive(Debug, Clone)]
pub struct ConstructedTour {
    pub tour: Tour,
    pub guaranteed: bool,
}

/// Builds a Hamiltonian tour on a metric instance, normalized to the start
/// city.
pub fn tsp_subroutine(instance: &Instance, mode: TspMode) -> Result<Tour> {
    Ok(tsp_construction(instance, mode)?.tour)
}

/// Like [`tsp_subroutine`] but also reports whether the guarantee path was
/// taken.
pub fn tsp_construction(instance: &Instance, mode: TspMode) -> Result<ConstructedTour> {
    if !instance.is_metric() {
        return Err(Error::MetricRequired);
    }
    let n = instance.n();
    let start = instance.start();
    if n <= 2 {
        let mut perm = vec![start];
        perm.extend((0..n).filter(|&c| c != start));
        return Ok(ConstructedTour { tour: Tour::new(perm)?, guaranteed: true });
    }
    let dist = DistMatrix::new(instance);
    let adj = mst_adjacency(n, &dist, start);
    match mode {
        TspMode::DoubleTree => {
            let order = preorder(&adj, start);
            Ok(ConstructedTour { tour: Tour::new(order)?, guaranteed: true })
        }
        TspMode::Christofides => {
            let mut degree = vec![0usize; n];
            let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n - 1);
            for v in 0..n {
                for &u in &adj[v] {
                    if v < u {
                        edges.push((v, u));
                        degree[v] += 1;
                        degree[u] += 1;
                    }
                }
            }
            let odd: Vec<usize> = (0..n).filter(|&v| degree[v] % 2 == 1).collect();
            let guaranteed = odd.len() <= MATCHING_EXACT_CAP;
            let matching = if guaranteed {
                exact_matching(&odd, &dist)
            } else {
                greedy_matching(&odd, &dist)
            };
            edges.extend(matching);
            let circuit = euler_circuit(n, &edges, start);
            let mut seen = vec![false; n];
            let mut order = Vec::with_capacity(n);
            for v in circuit {
                if !seen[v] {
                    seen[v] = true;
                    order.push(v);
                }
            }
            Ok(ConstructedTour { tour: Tour::new(order)?, guaranteed })
        }
    }
}

/// Prim's algorithm; adjacency lists are sorted so traversals are
/// deterministic.
pub(crate) fn mst_adjacency(n: usize, dist: &DistMatrix, root: usize) -> Vec<Vec<usize>> {
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    best[root] = 0.0;
    let mut adj = vec![Vec::new(); n];
    for _ in 0..n {
        let mut v = usize::MAX;
        let mut v_cost = f64::INFINITY;
        for u in 0..n {
            if !in_tree[u] && best[u] < v_cost {
                v = u;
                v_cost = best[u];
            }
        }
        in_tree[v] = true;
        if parent[v] != usize::MAX {
            adj[v].push(parent[v]);
            adj[parent[v]].push(v);
        }
        for u in 0..n {
            if !in_tree[u] && dist.get(v, u) < best[u] {
                best[u] = dist.get(v, u);
                parent[u] = v;
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

fn preorder(adj: &[Vec<usize>], root: usize) -> Vec<usize> {
    let n = adj.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        order.push(v);
        // push in reverse so that smaller city ids are visited first
        for &u in adj[v].iter().rev() {
            if !visited[u] {
                stack.push(u);
            }
        }
    }
    order
}

/// Minimum-weight perfect matching over `odd` by subset DP. `odd.len()` is
/// even (handshake on the MST) and at most [`MATCHING_EXACT_CAP`].
fn exact_matching(odd: &[usize], dist: &DistMatrix) -> Vec<(usize, usize)> {
    let k = odd.len();
    if k == 0 {
        return Vec::new();
    }
    let full = (1usize << k) - 1;
    let mut cost = vec![f64::INFINITY; 1 << k];
    let mut partner = vec![usize::MAX; 1 << k];
    cost[0] = 0.0;
    for mask in 1..=full {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let mut rest = mask & !(1 << i);
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = mask & !(1 << i) & !(1 << j);
            let cand = cost[prev] + dist.get(odd[i], odd[j]);
            if cand < cost[mask] {
                cost[mask] = cand;
                partner[mask] = j;
            }
        }
    }
    let mut pairs = Vec::with_capacity(k / 2);
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let j = partner[mask];
        pairs.push((odd[i], odd[j]));
        mask &= !(1 << i) & !(1 << j);
    }
    pairs
}

/// Greedy fallback: repeatedly match the globally closest unmatched pair.
fn greedy_matching(odd: &[usize], dist: &DistMatrix) -> Vec<(usize, usize)> {
    let k = odd.len();
    let mut matched = vec![false; k];
    let mut pairs = Vec::with_capacity(k / 2);
    for _ in 0..k / 2 {
        let mut best = f64::INFINITY;
        let mut best_pair = (usize::MAX, usize::MAX);
        for i in 0..k {
            if matched[i] {
                continue;
            }
            for j in (i + 1)..k {
                if matched[j] {
                    continue;
                }
                let d = dist.get(odd[i], odd[j]);
                if d < best {
                    best = d;
                    best_pair = (i, j);
                }
            }
        }
        matched[best_pair.0] = true;
        matched[best_pair.1] = true;
        pairs.push((odd[best_pair.0], odd[best_pair.1]));
    }
    pairs
}

/// Hierholzer's algorithm on the multigraph edge list. Every vertex has
/// even degree and the graph is connected, so a circuit through `root`
/// exists.
fn euler_circuit(n: usize, edges: &[(usize, usize)], root: usize) -> Vec<usize> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, id));
        adj[v].push((u, id));
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut used = vec![false; edges.len()];
    let mut next = vec![0usize; n];
    let mut stack = vec![root];
    let mut circuit = Vec::with_capacity(edges.len() + 1);
    while let Some(&v) = stack.last() {
        let mut advanced = false;
        while next[v] < adj[v].len() {
            let (u, id) = adj[v][next[v]];
            next[v] += 1;
            if !used[id] {
                used[id] = true;
                stack.push(u);
                advanced = true;
                break;
            }
        }
        if !advanced {
            circuit.push(v);
            stack.pop();
        }
    }
    circuit.reverse();
    circuit
}
