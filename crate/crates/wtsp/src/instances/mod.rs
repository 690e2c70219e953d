//! Benchmark instance generation: node placement in `[0, 1000]^2` (uniform,
//! bi-cluster Gaussian, or mutation-structured) combined with the C1/C2/C3
//! node weight schemes, plus file I/O in a TSPLIB-extended format.
//!
//! Coordinates are emitted as integers so that Euclidean distances, files
//! and downstream experiments reproduce bit-identically from the seeds in a
//! [`GeneratorSpec`].

pub mod io;

use crate::core::{Error, Instance, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Node placement scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlacementKind {
    /// Random uniform Euclidean: coordinates uniform in the bounding box.
    Rue,
    /// Two Gaussian clusters around well-separated centers.
    Netgen,
    /// Uniform placement followed by rounds of structural mutations.
    Tspgen,
}

impl PlacementKind {
    pub const ALL: [PlacementKind; 3] =
        [PlacementKind::Rue, PlacementKind::Netgen, PlacementKind::Tspgen];

    pub fn name(&self) -> &'static str {
        match self {
            PlacementKind::Rue => "rue",
            PlacementKind::Netgen => "netgen",
            PlacementKind::Tspgen => "tspgen",
        }
    }
}

impl fmt::Display for PlacementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for PlacementKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rue" => Ok(PlacementKind::Rue),
            "netgen" => Ok(PlacementKind::Netgen),
            "tspgen" => Ok(PlacementKind::Tspgen),
            other => Err(Error::InvalidParam(format!("unknown placement '{other}'"))),
        }
    }
}

/// Weight assignment scheme. `w(start) = 1` in every class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightClass {
    /// Constant weight `d` for every non-start city, `d` in `[0, 1]`.
    C1,
    /// Uniform integers from `{1, ..., d}`.
    C2,
    /// Uniform integers from `{0, ..., d}`.
    C3,
}

impl WeightClass {
    pub const ALL: [WeightClass; 3] = [WeightClass::C1, WeightClass::C2, WeightClass::C3];

    pub fn name(&self) -> &'static str {
        match self {
            WeightClass::C1 => "C1",
            WeightClass::C2 => "C2",
            WeightClass::C3 => "C3",
        }
    }
}

impl fmt::Display for WeightClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for WeightClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C1" | "c1" => Ok(WeightClass::C1),
            "C2" | "c2" => Ok(WeightClass::C2),
            "C3" | "c3" => Ok(WeightClass::C3),
            other => Err(Error::InvalidParam(format!("unknown weight class '{other}'"))),
        }
    }
}

/// A weight class with its parameter `d`, validated on construction. The
/// integer classes accept `d` in `1..=10` (the published per-class ranges
/// are enforced by the suite manifest, not here).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightConfig {
    class: WeightClass,
    d: f64,
}

impl WeightConfig {
    pub fn new(class: WeightClass, d: f64) -> Result<Self> {
        match class {
            WeightClass::C1 => {
                if !(0.0..=1.0).contains(&d) {
                    return Err(Error::InvalidParam(format!(
                        "C1 requires d in [0, 1], got {d}"
                    )));
                }
            }
            WeightClass::C2 | WeightClass::C3 => {
                if d.fract() != 0.0 || !(1.0..=10.0).contains(&d) {
                    return Err(Error::InvalidParam(format!(
                        "{} requires an integer d in 1..=10, got {d}",
                        class.name()
                    )));
                }
            }
        }
        Ok(WeightConfig { class, d })
    }

    pub fn class(&self) -> WeightClass {
        self.class
    }

    pub fn d(&self) -> f64 {
        self.d
    }
}

/// Everything needed to regenerate one instance deterministically.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub n: usize,
    pub placement: PlacementKind,
    pub weight_config: WeightConfig,
    pub placement_seed: u64,
    pub weight_seed: u64,
}

impl GeneratorSpec {
    pub fn instance_name(&self) -> String {
        format!(
            "{}-{}-d{}-n{}-p{}-w{}",
            self.placement.name(),
            self.weight_config.class().name(),
            self.weight_config.d(),
            self.n,
            self.placement_seed,
            self.weight_seed
        )
    }
}

/// Bounding box of every placement.
pub const BOX_MAX: f64 = 1000.0;
/// Cluster centers are drawn from this sub-box with a minimum separation.
const NETGEN_CENTER_LO: f64 = 200.0;
const NETGEN_CENTER_HI: f64 = 800.0;
const NETGEN_MIN_SEPARATION: f64 = 400.0;
const NETGEN_SIGMA: f64 = 60.0;
/// Default number of tspgen mutation rounds.
pub const TSPGEN_DEFAULT_ROUNDS: usize = 10;

/// Generates the node placement of a spec (integer coordinates in the
/// box). Deterministic in the placement seed.
pub fn generate_placement(spec: &GeneratorSpec) -> Result<Vec<(f64, f64)>> {
    generate_placement_kind(spec.n, spec.placement, spec.placement_seed, TSPGEN_DEFAULT_ROUNDS)
}

/// Placement with an explicit tspgen round count (`rounds = 0` degenerates
/// to rue).
pub fn generate_placement_kind(
    n: usize,
    kind: PlacementKind,
    seed: u64,
    tspgen_rounds: usize,
) -> Result<Vec<(f64, f64)>> {
    if n < 2 {
        return Err(Error::InvalidParam(format!("placement needs n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = match kind {
        PlacementKind::Rue => rue_points(n, &mut rng),
        PlacementKind::Netgen => netgen_points(n, &mut rng),
        PlacementKind::Tspgen => tspgen_points(n, &mut rng, tspgen_rounds),
    };
    Ok(points)
}

fn rue_points(n: usize, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| (rng.gen_range(0..=BOX_MAX as i64) as f64, rng.gen_range(0..=BOX_MAX as i64) as f64))
        .collect()
}

/// One standard normal pair via Box-Muller.
fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

fn in_box(p: (f64, f64)) -> bool {
    (0.0..=BOX_MAX).contains(&p.0) && (0.0..=BOX_MAX).contains(&p.1)
}

fn netgen_points(n: usize, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let center_coord =
        |rng: &mut ChaCha8Rng| rng.gen_range(NETGEN_CENTER_LO as i64..=NETGEN_CENTER_HI as i64) as f64;
    let c1 = (center_coord(rng), center_coord(rng));
    let c2 = loop {
        let c = (center_coord(rng), center_coord(rng));
        let sep = ((c.0 - c1.0).powi(2) + (c.1 - c1.1).powi(2)).sqrt();
        if sep >= NETGEN_MIN_SEPARATION {
            break c;
        }
    };
    let first = n - n / 2;
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        let center = if i < first { c1 } else { c2 };
        // out-of-box samples are rejected and redrawn
        let p = loop {
            let (gx, gy) = normal_pair(rng);
            let cand = (center.0 + NETGEN_SIGMA * gx, center.1 + NETGEN_SIGMA * gy);
            if in_box(cand) {
                break cand;
            }
        };
        points.push((p.0.round(), p.1.round()));
    }
    points
}

fn tspgen_points(n: usize, rng: &mut ChaCha8Rng, rounds: usize) -> Vec<(f64, f64)> {
    let mut points = rue_points(n, rng);
    for _ in 0..rounds {
        match rng.gen_range(0..3) {
            0 => explosion(&mut points, rng),
            1 => implosion(&mut points, rng),
            _ => cluster(&mut points, rng),
        }
    }
    for p in &mut points {
        p.0 = p.0.round().clamp(0.0, BOX_MAX);
        p.1 = p.1.round().clamp(0.0, BOX_MAX);
    }
    points
}

fn random_disc(rng: &mut ChaCha8Rng) -> ((f64, f64), f64) {
    let center = (rng.gen::<f64>() * BOX_MAX, rng.gen::<f64>() * BOX_MAX);
    let radius = 50.0 + rng.gen::<f64>() * 150.0;
    (center, radius)
}

/// Push every point inside a random disc onto its boundary.
fn explosion(points: &mut [(f64, f64)], rng: &mut ChaCha8Rng) {
    let (center, radius) = random_disc(rng);
    for p in points.iter_mut() {
        let dx = p.0 - center.0;
        let dy = p.1 - center.1;
        let dist = (dx * dx + dy * dy).sqrt();
        if dist >= radius {
            continue;
        }
        let (ux, uy) = if dist > 0.0 {
            (dx / dist, dy / dist)
        } else {
            let angle = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
            (angle.cos(), angle.sin())
        };
        p.0 = (center.0 + radius * ux).clamp(0.0, BOX_MAX);
        p.1 = (center.1 + radius * uy).clamp(0.0, BOX_MAX);
    }
}

/// Pull every point inside a random disc halfway toward its center.
fn implosion(points: &mut [(f64, f64)], rng: &mut ChaCha8Rng) {
    let (center, radius) = random_disc(rng);
    for p in points.iter_mut() {
        let dx = p.0 - center.0;
        let dy = p.1 - center.1;
        if (dx * dx + dy * dy).sqrt() < radius {
            p.0 = center.0 + dx * 0.5;
            p.1 = center.1 + dy * 0.5;
        }
    }
}

/// Resample a random tenth of the points tightly around a random center.
fn cluster(points: &mut [(f64, f64)], rng: &mut ChaCha8Rng) {
    let center = (rng.gen::<f64>() * BOX_MAX, rng.gen::<f64>() * BOX_MAX);
    for p in points.iter_mut() {
        if !rng.gen_bool(0.1) {
            continue;
        }
        *p = loop {
            let (gx, gy) = normal_pair(rng);
            let cand = (center.0 + 30.0 * gx, center.1 + 30.0 * gy);
            if in_box(cand) {
                break cand;
            }
        };
    }
}

/// Draws the weight vector for the given points: `w(1) = 1`, the rest
/// i.i.d. per the class. Deterministic in the weight seed.
pub fn assign_weights(
    points: &[(f64, f64)],
    config: &WeightConfig,
    seed: u64,
) -> Result<Vec<f64>> {
    let n = points.len();
    if n == 0 {
        return Err(Error::EmptyInstance);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = Vec::with_capacity(n);
    weights.push(1.0);
    for _ in 1..n {
        let w = match config.class {
            WeightClass::C1 => config.d,
            WeightClass::C2 => rng.gen_range(1..=config.d as u64) as f64,
            WeightClass::C3 => rng.gen_range(0..=config.d as u64) as f64,
        };
        weights.push(w);
    }
    Ok(weights)
}

/// Generates the full instance of a spec.
pub fn generate_instance(spec: &GeneratorSpec) -> Result<Instance> {
    let points = generate_placement(spec)?;
    let weights = assign_weights(&points, &spec.weight_config, spec.weight_seed)?;
    Instance::euclidean(spec.instance_name(), points, weights)
}

/// The benchmark cross product: 3 placements x 30 weight configurations
/// (C1: 11 values of d, C2: 9, C3: 10) x 5 sizes x 10 placement seeds x 10
/// weight seeds = 45,000 specs. Emitted as specs, not files.
pub fn suite_manifest() -> Vec<GeneratorSpec> {
    let mut configs = Vec::with_capacity(30);
    for i in 0..=10 {
        configs.push(WeightConfig::new(WeightClass::C1, i as f64 / 10.0).unwrap());
    }
    for d in 2..=10 {
        configs.push(WeightConfig::new(WeightClass::C2, d as f64).unwrap());
    }
    for d in 1..=10 {
        configs.push(WeightConfig::new(WeightClass::C3, d as f64).unwrap());
    }
    let sizes = [25usize, 50, 100, 500, 1000];
    let mut specs = Vec::with_capacity(45_000);
    for placement in PlacementKind::ALL {
        for config in &configs {
            for &n in &sizes {
                for placement_seed in 1..=10u64 {
                    for weight_seed in 1..=10u64 {
                        specs.push(GeneratorSpec {
                            n,
                            placement,
                            weight_config: *config,
                            placement_seed,
                            weight_seed,
                        });
                    }
                }
            }
        }
    }
    specs
}
