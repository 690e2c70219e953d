//! CSV serialization of experiment outputs. Files start with one `#`
//! comment line recording the schema version, tool version and seeds;
//! numbers use shortest round-trip formatting so reruns are byte
//! comparable.

use super::stats::PerfCell;
use super::{RatioRow, RatioSummary, ResultRow};
use crate::core::{Error, Result};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

pub const RESULTS_SCHEMA: u32 = 1;

const RESULTS_HEADER: &str =
    "instance,placement,class,d,n,algorithm,fitness,run,seed,weighted,tsp,evaluations,wall_ms,tour_file";

/// One `#` comment line with tool version plus caller context.
pub fn schema_comment(kind: &str, context: &str) -> String {
    format!(
        "# wtsp-{kind} schema={RESULTS_SCHEMA} tool=wtsp/{} {context}",
        env!("CARGO_PKG_VERSION")
    )
}

pub fn results_to_csv(rows: &[ResultRow], comment: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{comment}");
    let _ = writeln!(out, "{RESULTS_HEADER}");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.instance,
            r.placement,
            r.class,
            r.d,
            r.n,
            r.algorithm,
            r.fitness,
            r.run,
            r.seed,
            r.weighted,
            r.tsp,
            r.evaluations,
            r.wall_ms,
            r.tour_file
        );
    }
    out
}

pub fn write_results_csv(path: impl AsRef<Path>, rows: &[ResultRow], comment: &str) -> Result<()> {
    fs::write(path, results_to_csv(rows, comment)).map_err(Error::from)
}

pub fn read_results_csv(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    parse_results_csv(&fs::read_to_string(path)?)
}

pub fn parse_results_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != RESULTS_HEADER {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("unexpected results header '{line}'"),
                });
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 14 {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected 14 fields, found {}", fields.len()),
            });
        }
        let parse_err = |what: &str| Error::Parse {
            line: idx + 1,
            msg: format!("invalid {what} value"),
        };
        rows.push(ResultRow {
            instance: fields[0].to_string(),
            placement: fields[1].to_string(),
            class: fields[2].to_string(),
            d: fields[3].to_string(),
            n: fields[4].parse().map_err(|_| parse_err("n"))?,
            algorithm: fields[5].to_string(),
            fitness: fields[6].to_string(),
            run: fields[7].parse().map_err(|_| parse_err("run"))?,
            seed: fields[8].parse().map_err(|_| parse_err("seed"))?,
            weighted: fields[9].parse().map_err(|_| parse_err("weighted"))?,
            tsp: fields[10].parse().map_err(|_| parse_err("tsp"))?,
            evaluations: fields[11].parse().map_err(|_| parse_err("evaluations"))?,
            wall_ms: fields[12].parse().map_err(|_| parse_err("wall_ms"))?,
            tour_file: fields[13].to_string(),
        });
    }
    if !saw_header {
        return Err(Error::Parse { line: 1, msg: "missing results header".into() });
    }
    Ok(rows)
}

pub fn perf_table_to_csv(cells: &[PerfCell], comment: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{comment}");
    let _ = writeln!(out, "class,d,algorithm,fitness,samples,mean,std,median,beats");
    for c in cells {
        let beats: Vec<String> = c
            .comparisons
            .iter()
            .filter(|cmp| cmp.significant)
            .map(|cmp| format!("{}(p={:.3e})", cmp.other, cmp.p_adjusted))
            .collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            c.class,
            c.d,
            c.algorithm,
            c.fitness,
            c.samples,
            c.mean,
            c.std,
            c.median,
            beats.join(";")
        );
    }
    out
}

pub fn write_perf_csv(path: impl AsRef<Path>, cells: &[PerfCell], comment: &str) -> Result<()> {
    fs::write(path, perf_table_to_csv(cells, comment)).map_err(Error::from)
}

pub fn ratios_to_csv(rows: &[RatioRow], comment: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{comment}");
    let _ = writeln!(
        out,
        "instance,placement,class,d,n,run,seed,weighted_driver_cost,tsp_driver_cost,ratio"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.instance,
            r.placement,
            r.class,
            r.d,
            r.n,
            r.run,
            r.seed,
            r.weighted_driver_cost,
            r.tsp_driver_cost,
            r.ratio
        );
    }
    out
}

pub fn write_ratio_csv(path: impl AsRef<Path>, rows: &[RatioRow], comment: &str) -> Result<()> {
    fs::write(path, ratios_to_csv(rows, comment)).map_err(Error::from)
}

pub fn ratio_summary_to_csv(rows: &[RatioSummary], comment: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{comment}");
    let _ = writeln!(out, "placement,class,d,n,count,q1,median,q3,max");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.placement, r.class, r.d, r.n, r.count, r.q1, r.median, r.q3, r.max
        );
    }
    out
}

pub fn write_ratio_summary_csv(
    path: impl AsRef<Path>,
    rows: &[RatioSummary],
    comment: &str,
) -> Result<()> {
    fs::write(path, ratio_summary_to_csv(rows, comment)).map_err(Error::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_row() -> ResultRow {
        ResultRow {
            instance: "rue-C2-d5-n10-p1-w1".into(),
            placement: "rue".into(),
            class: "C2".into(),
            d: "5".into(),
            n: 10,
            algorithm: "rls-inversion".into(),
            fitness: "weighted".into(),
            run: 3,
            seed: 987654321,
            weighted: 1234.5678901234,
            tsp: 345.25,
            evaluations: 10_000,
            wall_ms: 12,
            tour_file: "x.tour".into(),
        }
    }

    #[test]
    fn results_roundtrip_is_exact() {
        let rows = vec![sample_row()];
        let text = results_to_csv(&rows, &schema_comment("results", "seed=1"));
        let back = parse_results_csv(&text).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].weighted, rows[0].weighted);
        assert_eq!(back[0].seed, rows[0].seed);
        assert_eq!(back[0].tour_file, rows[0].tour_file);
        // serializing again reproduces the same bytes
        assert_eq!(results_to_csv(&back, &schema_comment("results", "seed=1")), text);
    }

    #[test]
    fn malformed_rows_carry_line_numbers() {
        let text = format!(
            "# c\n{}\na,b,C2,5,notanumber,alg,weighted,0,1,2,3,4,5,t\n",
            super::RESULTS_HEADER
        );
        match parse_results_csv(&text).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_results_csv("# only a comment\n").is_err());
    }
}
