//! TSPLIB-extended file format.
//!
//! Instances are plain text: a `KEY : VALUE` header, a
//! `NODE_COORD_SECTION` (or `EDGE_WEIGHT_SECTION` for explicit matrices),
//! then a `NODE_WEIGHT_SECTION` with one `index weight` line per city, and
//! a terminating `EOF`. `EDGE_WEIGHT_TYPE : EUC_2D_REAL` denotes exact
//! Euclidean distances; classical `EUC_2D` files (nearest-integer rounding,
//! no weight section) are accepted and loaded as unit-weight instances.
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! write/read cycle reproduces every field exactly.

use super::{GeneratorSpec, PlacementKind, WeightClass};
use crate::core::{Distances, Error, Instance, Result, Tour};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

/// Non-fatal observations made while reading an instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// No NODE_WEIGHT_SECTION; weights defaulted to 1.
    MissingWeights,
    /// The start city's weight is not 1, violating the generation protocol.
    StartWeightNotOne(f64),
}

/// Provenance of a generated instance, carried in the COMMENT line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InstanceMeta {
    pub placement: Option<PlacementKind>,
    pub class: Option<WeightClass>,
    pub d: Option<f64>,
    pub placement_seed: Option<u64>,
    pub weight_seed: Option<u64>,
}

impl InstanceMeta {
    pub fn from_spec(spec: &GeneratorSpec) -> Self {
        InstanceMeta {
            placement: Some(spec.placement),
            class: Some(spec.weight_config.class()),
            d: Some(spec.weight_config.d()),
            placement_seed: Some(spec.placement_seed),
            weight_seed: Some(spec.weight_seed),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.placement.is_none()
            && self.class.is_none()
            && self.d.is_none()
            && self.placement_seed.is_none()
            && self.weight_seed.is_none()
    }

    fn to_comment(&self) -> String {
        let mut parts = Vec::new();
        if let Some(p) = self.placement {
            parts.push(format!("placement={p}"));
        }
        if let Some(c) = self.class {
            parts.push(format!("class={c}"));
        }
        if let Some(d) = self.d {
            parts.push(format!("d={d}"));
        }
        if let Some(s) = self.placement_seed {
            parts.push(format!("placement-seed={s}"));
        }
        if let Some(s) = self.weight_seed {
            parts.push(format!("weight-seed={s}"));
        }
        parts.join(" ")
    }

    fn from_comment(comment: &str) -> Self {
        let mut meta = InstanceMeta::default();
        for part in comment.split_whitespace() {
            let Some((key, value)) = part.split_once('=') else { continue };
            match key {
                "placement" => meta.placement = PlacementKind::from_str(value).ok(),
                "class" => meta.class = WeightClass::from_str(value).ok(),
                "d" => meta.d = value.parse().ok(),
                "placement-seed" => meta.placement_seed = value.parse().ok(),
                "weight-seed" => meta.weight_seed = value.parse().ok(),
                _ => {}
            }
        }
        meta
    }
}

/// An instance loaded from disk, with its provenance and any warnings.
#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub instance: Instance,
    pub meta: InstanceMeta,
    pub warnings: Vec<Warning>,
}

/// Serializes an instance (and optional provenance) to a file.
pub fn write_instance(
    instance: &Instance,
    meta: Option<&InstanceMeta>,
    path: impl AsRef<Path>,
) -> Result<()> {
    fs::write(path, instance_to_string(instance, meta)).map_err(Error::from)
}

/// The file body of an instance.
pub fn instance_to_string(instance: &Instance, meta: Option<&InstanceMeta>) -> String {
    let n = instance.n();
    let mut out = String::new();
    let _ = writeln!(out, "NAME : {}", instance.name());
    let _ = writeln!(out, "TYPE : WTSP");
    if let Some(meta) = meta.filter(|m| !m.is_empty()) {
        let _ = writeln!(out, "COMMENT : {}", meta.to_comment());
    }
    let _ = writeln!(out, "DIMENSION : {n}");
    if instance.start() != 0 {
        let _ = writeln!(out, "START : {}", instance.start() + 1);
    }
    match instance.distances() {
        Distances::Euclidean { coords, rounded } => {
            let kind = if *rounded { "EUC_2D" } else { "EUC_2D_REAL" };
            let _ = writeln!(out, "EDGE_WEIGHT_TYPE : {kind}");
            let _ = writeln!(out, "NODE_COORD_SECTION");
            for (i, (x, y)) in coords.iter().enumerate() {
                let _ = writeln!(out, "{} {x} {y}", i + 1);
            }
        }
        Distances::Explicit { .. } => {
            let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EXPLICIT");
            let _ = writeln!(out, "EDGE_WEIGHT_FORMAT : FULL_MATRIX");
            let _ = writeln!(out, "METRIC : {}", if instance.is_metric() { "yes" } else { "no" });
            let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
            for a in 0..n {
                let row: Vec<String> =
                    (0..n).map(|b| format!("{}", instance.distance(a, b))).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
    }
    let _ = writeln!(out, "NODE_WEIGHT_SECTION");
    for (i, w) in instance.weights().iter().enumerate() {
        let _ = writeln!(out, "{} {w}", i + 1);
    }
    let _ = writeln!(out, "EOF");
    out
}

/// Reads an instance file; see [`parse_instance`].
pub fn read_instance(path: impl AsRef<Path>) -> Result<LoadedInstance> {
    let text = fs::read_to_string(&path)?;
    parse_instance(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EdgeWeightKind {
    Euc2dReal,
    Euc2d,
    Explicit,
}

/// Parses an instance from text. Errors carry 1-based line numbers.
pub fn parse_instance(text: &str) -> Result<LoadedInstance> {
    let err = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };

    let mut name = String::new();
    let mut comment = String::new();
    let mut dimension: Option<usize> = None;
    let mut start = 0usize;
    let mut ew_kind: Option<EdgeWeightKind> = None;
    let mut metric_claim: Option<bool> = None;
    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut matrix: Vec<Vec<f64>> = Vec::new();
    let mut weights: Vec<Option<f64>> = Vec::new();
    let mut saw_weights = false;

    #[derive(PartialEq)]
    enum Section {
        Header,
        Coords,
        Matrix,
        Weights,
    }
    let mut section = Section::Header;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        let upper = line.to_ascii_uppercase();
        match upper.as_str() {
            "NODE_COORD_SECTION" => {
                let dim = dimension.ok_or_else(|| err(lineno, "DIMENSION must precede sections"))?;
                coords = vec![None; dim];
                section = Section::Coords;
                continue;
            }
            "EDGE_WEIGHT_SECTION" => {
                if dimension.is_none() {
                    return Err(err(lineno, "DIMENSION must precede sections"));
                }
                section = Section::Matrix;
                continue;
            }
            "NODE_WEIGHT_SECTION" => {
                let dim = dimension.ok_or_else(|| err(lineno, "DIMENSION must precede sections"))?;
                weights = vec![None; dim];
                saw_weights = true;
                section = Section::Weights;
                continue;
            }
            _ => {}
        }

        match section {
            Section::Header => {
                let (key, value) = line
                    .split_once(':')
                    .ok_or_else(|| err(lineno, "expected 'KEY : VALUE'"))?;
                let key = key.trim().to_ascii_uppercase();
                let value = value.trim();
                match key.as_str() {
                    "NAME" => name = value.to_string(),
                    "COMMENT" => comment = value.to_string(),
                    "TYPE" => {
                        let t = value.to_ascii_uppercase();
                        if t != "WTSP" && t != "TSP" {
                            return Err(err(lineno, &format!("unsupported TYPE '{value}'")));
                        }
                    }
                    "DIMENSION" => {
                        let dim: usize = value
                            .parse()
                            .map_err(|_| err(lineno, "DIMENSION must be a positive integer"))?;
                        if dim == 0 {
                            return Err(err(lineno, "DIMENSION must be positive"));
                        }
                        dimension = Some(dim);
                    }
                    "START" => {
                        let s: usize =
                            value.parse().map_err(|_| err(lineno, "START must be an index"))?;
                        if s == 0 {
                            return Err(err(lineno, "START is 1-based"));
                        }
                        start = s - 1;
                    }
                    "EDGE_WEIGHT_TYPE" => {
                        ew_kind = Some(match value.to_ascii_uppercase().as_str() {
                            "EUC_2D_REAL" => EdgeWeightKind::Euc2dReal,
                            "EUC_2D" => EdgeWeightKind::Euc2d,
                            "EXPLICIT" => EdgeWeightKind::Explicit,
                            other => {
                                return Err(err(
                                    lineno,
                                    &format!("unsupported EDGE_WEIGHT_TYPE '{other}'"),
                                ))
                            }
                        });
                    }
                    "EDGE_WEIGHT_FORMAT" => {
                        if !value.eq_ignore_ascii_case("FULL_MATRIX") {
                            return Err(err(
                                lineno,
                                &format!("unsupported EDGE_WEIGHT_FORMAT '{value}'"),
                            ));
                        }
                    }
                    "METRIC" => {
                        metric_claim = Some(matches!(
                            value.to_ascii_lowercase().as_str(),
                            "yes" | "true" | "1"
                        ));
                    }
                    // unknown headers are tolerated for TSPLIB compatibility
                    _ => {}
                }
            }
            Section::Coords => {
                let mut it = line.split_whitespace();
                let i: usize = it
                    .next()
                    .ok_or_else(|| err(lineno, "empty coordinate line"))?
                    .parse()
                    .map_err(|_| err(lineno, "coordinate index must be an integer"))?;
                let x: f64 = it
                    .next()
                    .ok_or_else(|| err(lineno, "missing x coordinate"))?
                    .parse()
                    .map_err(|_| err(lineno, "x coordinate must be a number"))?;
                let y: f64 = it
                    .next()
                    .ok_or_else(|| err(lineno, "missing y coordinate"))?
                    .parse()
                    .map_err(|_| err(lineno, "y coordinate must be a number"))?;
                if it.next().is_some() {
                    return Err(err(lineno, "trailing tokens on coordinate line"));
                }
                if i == 0 || i > coords.len() {
                    return Err(err(lineno, "coordinate index out of range"));
                }
                if coords[i - 1].is_some() {
                    return Err(err(lineno, "duplicate coordinate index"));
                }
                coords[i - 1] = Some((x, y));
            }
            Section::Matrix => {
                let row: std::result::Result<Vec<f64>, _> =
                    line.split_whitespace().map(str::parse).collect();
                let row =
                    row.map_err(|_| err(lineno, "matrix entries must be numbers"))?;
                let dim = dimension.unwrap();
                if row.len() != dim {
                    return Err(err(lineno, &format!("matrix row needs {dim} entries")));
                }
                if matrix.len() == dim {
                    return Err(err(lineno, "too many matrix rows"));
                }
                matrix.push(row);
            }
            Section::Weights => {
                let mut it = line.split_whitespace();
                let i: usize = it
                    .next()
                    .ok_or_else(|| err(lineno, "empty weight line"))?
                    .parse()
                    .map_err(|_| err(lineno, "weight index must be an integer"))?;
                let w: f64 = it
                    .next()
                    .ok_or_else(|| err(lineno, "missing weight value"))?
                    .parse()
                    .map_err(|_| err(lineno, "weight must be a number"))?;
                if i == 0 || i > weights.len() {
                    return Err(err(lineno, "weight index out of range"));
                }
                weights[i - 1] = Some(w);
            }
        }
    }

    let dim = dimension.ok_or_else(|| err(text.lines().count(), "missing DIMENSION"))?;
    let kind = ew_kind.unwrap_or(EdgeWeightKind::Euc2dReal);

    let mut warnings = Vec::new();
    let weights: Vec<f64> = if saw_weights {
        let mut out = Vec::with_capacity(dim);
        for (i, w) in weights.iter().enumerate() {
            out.push(w.ok_or_else(|| {
                err(text.lines().count(), &format!("missing weight for city {}", i + 1))
            })?);
        }
        out
    } else {
        warnings.push(Warning::MissingWeights);
        vec![1.0; dim]
    };
    if (weights[start] - 1.0).abs() > 1e-12 {
        warnings.push(Warning::StartWeightNotOne(weights[start]));
    }

    let instance = match kind {
        EdgeWeightKind::Euc2dReal | EdgeWeightKind::Euc2d => {
            let mut pts = Vec::with_capacity(dim);
            for (i, c) in coords.iter().enumerate() {
                pts.push(c.ok_or_else(|| {
                    err(text.lines().count(), &format!("missing coordinates for city {}", i + 1))
                })?);
            }
            Instance::euclidean_with_rounding(
                name,
                pts,
                weights,
                kind == EdgeWeightKind::Euc2d,
            )?
        }
        EdgeWeightKind::Explicit => {
            if matrix.len() != dim {
                return Err(err(
                    text.lines().count(),
                    &format!("expected {dim} matrix rows, found {}", matrix.len()),
                ));
            }
            Instance::explicit(name, matrix, weights, metric_claim.unwrap_or(false))?
        }
    };
    let instance = instance.with_start(start)?;
    Ok(LoadedInstance { instance, meta: InstanceMeta::from_comment(&comment), warnings })
}

/// Serializes generator specs as a manifest CSV (one regenerable instance
/// per line; `file` is the conventional file name).
pub fn manifest_to_csv(specs: &[GeneratorSpec]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# wtsp-manifest schema=1 count={}", specs.len());
    let _ = writeln!(out, "name,placement,class,d,n,placement_seed,weight_seed,file");
    for s in specs {
        let name = s.instance_name();
        let _ = writeln!(
            out,
            "{name},{},{},{},{},{},{},{name}.wtsp",
            s.placement,
            s.weight_config.class(),
            s.weight_config.d(),
            s.n,
            s.placement_seed,
            s.weight_seed
        );
    }
    out
}

pub fn write_manifest(path: impl AsRef<Path>, specs: &[GeneratorSpec]) -> Result<()> {
    fs::write(path, manifest_to_csv(specs)).map_err(Error::from)
}

/// Reads a manifest CSV back into generator specs.
pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<GeneratorSpec>> {
    let text = fs::read_to_string(path)?;
    let mut specs = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected 8 fields, found {}", fields.len()),
            });
        }
        let parse_err = |what: &str| Error::Parse {
            line: idx + 1,
            msg: format!("invalid {what} value"),
        };
        let class: WeightClass = fields[2].parse()?;
        let d: f64 = fields[3].parse().map_err(|_| parse_err("d"))?;
        specs.push(GeneratorSpec {
            n: fields[4].parse().map_err(|_| parse_err("n"))?,
            placement: fields[1].parse()?,
            weight_config: super::WeightConfig::new(class, d)?,
            placement_seed: fields[5].parse().map_err(|_| parse_err("placement_seed"))?,
            weight_seed: fields[6].parse().map_err(|_| parse_err("weight_seed"))?,
        });
    }
    Ok(specs)
}

/// Writes a tour in TSPLIB TOUR format (1-based indices, -1 terminator).
pub fn write_tour(tour: &Tour, name: &str, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "NAME : {name}");
    let _ = writeln!(out, "TYPE : TOUR");
    let _ = writeln!(out, "DIMENSION : {}", tour.len());
    let _ = writeln!(out, "TOUR_SECTION");
    for &c in tour.cities() {
        let _ = writeln!(out, "{}", c + 1);
    }
    let _ = writeln!(out, "-1");
    let _ = writeln!(out, "EOF");
    fs::write(path, out).map_err(Error::from)
}

/// Reads a TSPLIB TOUR file.
pub fn read_tour(path: impl AsRef<Path>) -> Result<Tour> {
    let text = fs::read_to_string(&path)?;
    let mut cities = Vec::new();
    let mut in_section = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.eq_ignore_ascii_case("tour_section") {
            in_section = true;
            continue;
        }
        if !in_section {
            continue;
        }
        if line == "-1" || line == "EOF" {
            break;
        }
        for tok in line.split_whitespace() {
            let c: i64 = tok.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("tour entry '{tok}' is not an integer"),
            })?;
            if c == -1 {
                break;
            }
            if c < 1 {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "tour indices are 1-based".to_string(),
                });
            }
            cities.push((c - 1) as usize);
        }
    }
    if cities.is_empty() {
        return Err(Error::Parse { line: 1, msg: "no TOUR_SECTION entries".to_string() });
    }
    Tour::new(cities)
}
