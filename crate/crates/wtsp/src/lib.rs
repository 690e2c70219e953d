//! Solvers, approximation constructions and experiment tooling for the node
//! weight dependent traveling salesperson problem (W-TSP).
//!
//! In the W-TSP every city carries a nonnegative weight and the cost of each
//! traveled edge grows with the total weight already picked up along the
//! tour. The crate provides:
//!
//! * [`core`] - instances, tours and the weighted / classical / latency cost
//!   functionals,
//! * [`exact`] - brute-force and subset-DP oracles for small instances,
//! * [`approx`] - the k-tour concatenation scheme with geometric sweep,
//!   weight expansion/collapse, and the orientation wrapper for `{1,2}`
//!   distances,
//! * [`heuristics`] - randomized local search with inversion / exchange /
//!   jump mutations under either fitness function,
//! * [`instances`] - rue / netgen / tspgen generators, the C1/C2/C3 weight
//!   schemes and TSPLIB-style file I/O,
//! * [`harness`] - batch experiment runner, rank statistics and CSV
//!   reporting.
//!
//! See the `examples/` directory for one runnable program per capability and
//! the `wtsp` binary for the command-line interface.

pub mod approx;
pub mod core;
pub mod exact;
pub mod harness;
pub mod heuristics;
pub mod instances;

pub use crate::core::{
    cost_report, latency_cost, prefix_weights, tsp_cost, tsp_path_cost, weighted_cost,
    CostReport, DistMatrix, Error, Instance, PrefixWeights, Result, Tour,
};
