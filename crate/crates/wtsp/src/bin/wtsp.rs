//! Command-line front end: instance generation, solving, approximation,
//! exact oracles, batch experiments, the driver-ratio protocol, rank
//! statistics and tour audits. The heavy lifting lives in the library;
//! this binary parses arguments, wires calls and prints results.
//!
//! Exit codes: 0 success, 2 validation or usage error, 3 audit mismatch.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use wtsp::approx::{
    approximate_bounded_weights, best_orientation, concat_approximation, good_k_tours, BMode,
    KTourMode, Selector, SweepParams, TspMode,
};
use wtsp::core::{cost_report, Error, Instance, Result, Tour};
use wtsp::exact::{brute_force_wtsp, exact_mlp, exact_tsp, held_karp_wtsp, ExactResult};
use wtsp::harness::{
    audit_matches, audit_tour, driver_ratio_protocol, report, run_experiment, save_experiment,
    stats, summarize_ratios, AlgorithmSpec, BudgetSpec, ExperimentSpec,
};
use wtsp::heuristics::{default_budget, rls, Fitness, MutationKind, RlsConfig};
use wtsp::instances::io::{
    read_instance, read_tour, write_instance, write_manifest, write_tour, InstanceMeta,
};
use wtsp::instances::{
    generate_instance, suite_manifest, GeneratorSpec, PlacementKind, WeightClass, WeightConfig,
};

#[derive(Parser)]
#[command(name = "wtsp", version, about = "Node weight dependent TSP toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlacementArg {
    Rue,
    Netgen,
    Tspgen,
}

impl From<PlacementArg> for PlacementKind {
    fn from(p: PlacementArg) -> Self {
        match p {
            PlacementArg::Rue => PlacementKind::Rue,
            PlacementArg::Netgen => PlacementKind::Netgen,
            PlacementArg::Tspgen => PlacementKind::Tspgen,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "UPPERCASE")]
enum ClassArg {
    #[value(alias = "c1")]
    C1,
    #[value(alias = "c2")]
    C2,
    #[value(alias = "c3")]
    C3,
}

impl From<ClassArg> for WeightClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::C1 => WeightClass::C1,
            ClassArg::C2 => WeightClass::C2,
            ClassArg::C3 => WeightClass::C3,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MutationArg {
    Inversion,
    Exchange,
    Jump,
}

impl From<MutationArg> for MutationKind {
    fn from(m: MutationArg) -> Self {
        match m {
            MutationArg::Inversion => MutationKind::Inversion,
            MutationArg::Exchange => MutationKind::Exchange,
            MutationArg::Jump => MutationKind::Jump,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FitnessArg {
    Weighted,
    Tsp,
}

impl From<FitnessArg> for Fitness {
    fn from(f: FitnessArg) -> Self {
        match f {
            FitnessArg::Weighted => Fitness::Weighted,
            FitnessArg::Tsp => Fitness::Tsp,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
}

#[derive(Args)]
struct InstanceInputs {
    /// Instance files (comma separated or repeated)
    #[arg(long, value_delimiter = ',')]
    instances: Vec<PathBuf>,
    /// Directory of .wtsp/.tsp instance files
    #[arg(long)]
    instance_dir: Option<PathBuf>,
}

impl InstanceInputs {
    fn collect(&self) -> Result<Vec<PathBuf>> {
        let mut files = self.instances.clone();
        if let Some(dir) = &self.instance_dir {
            let mut found = Vec::new();
            for entry in std::fs::read_dir(dir)? {
                let path = entry?.path();
                let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
                if matches!(ext, "wtsp" | "tsp") {
                    found.push(path);
                }
            }
            found.sort();
            files.extend(found);
        }
        if files.is_empty() {
            return Err(Error::InvalidParam("no instance files given".into()));
        }
        Ok(files)
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Total fitness evaluations per run
    #[arg(long)]
    budget: Option<u64>,
    /// Fitness evaluations per city (default 1000)
    #[arg(long)]
    budget_per_city: Option<u64>,
    /// Wall-clock limit per run in milliseconds (breaks reproducibility)
    #[arg(long)]
    wall_ms: Option<u64>,
}

impl BudgetArgs {
    fn to_spec(&self) -> Result<BudgetSpec> {
        match (self.budget, self.budget_per_city, self.wall_ms) {
            (Some(b), None, None) => Ok(BudgetSpec::Total(b)),
            (None, Some(b), None) => Ok(BudgetSpec::PerCity(b)),
            (None, None, Some(ms)) => Ok(BudgetSpec::WallMs(ms)),
            (None, None, None) => Ok(BudgetSpec::PerCity(1000)),
            _ => Err(Error::InvalidParam(
                "choose one of --budget, --budget-per-city, --wall-ms".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate one instance file
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        placement: PlacementArg,
        #[arg(long, value_enum)]
        class: ClassArg,
        /// Weight parameter (C1: real in [0,1]; C2/C3: integer 1..=10)
        #[arg(long)]
        d: f64,
        #[arg(long, default_value_t = 1)]
        placement_seed: u64,
        #[arg(long, default_value_t = 1)]
        weight_seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit the 45,000-instance benchmark manifest, optionally writing files
    GenerateSuite {
        /// Manifest CSV to write
        #[arg(long)]
        manifest: PathBuf,
        /// Also write instance files listed in the manifest
        #[arg(long)]
        materialize: bool,
        /// Directory for materialized instances
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Cap on materialized files (the full suite is 45,000)
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Run randomized local search on one instance
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// Solver family; only rls is built in
        #[arg(long, default_value = "rls")]
        algo: String,
        #[arg(long, value_enum, default_value_t = MutationArg::Inversion)]
        mutation: MutationArg,
        #[arg(long, value_enum, default_value_t = FitnessArg::Weighted)]
        fitness: FitnessArg,
        /// Evaluation budget (default 1000 * n)
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print every strict improvement
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        tour_out: Option<PathBuf>,
    },
    /// Approximation constructions (concatenation scheme and wrappers)
    Approx {
        #[arg(long)]
        instance: PathBuf,
        /// k-tour construction
        #[arg(long, default_value = "exact")]
        ktours: String,
        /// TSP subroutine for the n-tour
        #[arg(long, default_value = "christofides")]
        tsp_mode: String,
        /// Subtour selection device
        #[arg(long, default_value = "sweep")]
        selector: String,
        /// Offset mode of the sweep: grid, random, or fixed
        #[arg(long, default_value = "grid")]
        b_mode: String,
        /// Grid resolution for b-mode grid
        #[arg(long, default_value_t = 64)]
        grid_m: usize,
        /// Offset value for b-mode fixed
        #[arg(long)]
        b: Option<f64>,
        /// Seed for b-mode random
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Geometric growth base
        #[arg(long, default_value_t = 3.59)]
        c: f64,
        /// Expand bounded integer weights before concatenating
        #[arg(long)]
        bounded: bool,
        /// Also report the better tour orientation
        #[arg(long)]
        orient: bool,
        #[arg(long)]
        tour_out: Option<PathBuf>,
    },
    /// Exact oracles for small instances
    Exact {
        #[arg(long)]
        instance: PathBuf,
        /// brute | held-karp | tsp | mlp
        #[arg(long, default_value = "held-karp")]
        method: String,
        #[arg(long)]
        tour_out: Option<PathBuf>,
    },
    /// Batch experiment over instances and algorithms, emitting CSV
    Experiment {
        #[command(flatten)]
        inputs: InstanceInputs,
        /// Algorithms, e.g. rls-inversion-weighted,rls-exchange-weighted
        #[arg(long, value_delimiter = ',')]
        algos: Vec<String>,
        #[arg(long, default_value_t = 30)]
        runs: u32,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Driver-ratio protocol: weighted vs classical fitness, same solver
    Ratio {
        #[command(flatten)]
        inputs: InstanceInputs,
        #[arg(long, default_value_t = 10)]
        runs: u32,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Per-run CSV; the group summary lands next to it as *_summary.csv
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Aggregate a results CSV: perf table with pairwise rank tests
    Stats {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Recompute the costs of a persisted tour and compare against records
    Audit {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        tour: PathBuf,
        /// Results CSV holding the recorded costs (matched by tour file name)
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        expected_weighted: Option<f64>,
        #[arg(long)]
        expected_tsp: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn num_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn load(path: &Path) -> Result<Instance> {
    let loaded = read_instance(path)?;
    for w in &loaded.warnings {
        eprintln!("warning: {}: {w:?}", path.display());
    }
    Ok(loaded.instance)
}

fn print_exact(label: &str, res: &ExactResult) {
    println!("{label} cost: {}", res.cost);
    println!("tour: {}", res.tour);
    println!("nodes expanded: {}", res.nodes_expanded);
}

fn maybe_write_tour(tour: &Tour, name: &str, out: &Option<PathBuf>) -> Result<()> {
    if let Some(path) = out {
        write_tour(tour, name, path)?;
        println!("tour written to {}", path.display());
    }
    Ok(())
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Generate { n, placement, class, d, placement_seed, weight_seed, out } => {
            let spec = GeneratorSpec {
                n,
                placement: placement.into(),
                weight_config: WeightConfig::new(class.into(), d)?,
                placement_seed,
                weight_seed,
            };
            let instance = generate_instance(&spec)?;
            write_instance(&instance, Some(&InstanceMeta::from_spec(&spec)), &out)?;
            println!("wrote {} ({} cities)", out.display(), n);
            Ok(ExitCode::SUCCESS)
        }
        Command::GenerateSuite { manifest, materialize, out_dir, limit } => {
            let specs = suite_manifest();
            write_manifest(&manifest, &specs)?;
            println!("manifest with {} specs written to {}", specs.len(), manifest.display());
            if materialize {
                let dir = out_dir.ok_or_else(|| {
                    Error::InvalidParam("--materialize requires --out-dir".into())
                })?;
                std::fs::create_dir_all(&dir)?;
                let cap = limit.unwrap_or(specs.len()).min(specs.len());
                // generation is pure per spec, so the batch fans out
                let bodies = wtsp::harness::parallel_map(cap, num_jobs(), |i| {
                    let spec = &specs[i];
                    let instance = generate_instance(spec)?;
                    Ok::<_, Error>((
                        format!("{}.wtsp", spec.instance_name()),
                        wtsp::instances::io::instance_to_string(
                            &instance,
                            Some(&InstanceMeta::from_spec(spec)),
                        ),
                    ))
                });
                for body in bodies {
                    let (name, text) = body?;
                    std::fs::write(dir.join(name), text)?;
                }
                println!("materialized {cap} instances into {}", dir.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { instance, algo, mutation, fitness, budget, seed, trace, tour_out } => {
            if algo != "rls" {
                return Err(Error::InvalidParam(format!("unknown algorithm '{algo}'")));
            }
            let inst = load(&instance)?;
            let budget = budget.unwrap_or_else(|| default_budget(inst.n()));
            let mut config = RlsConfig::new(mutation.into(), fitness.into(), budget, seed);
            config.record_trace = trace;
            let result = rls(&inst, &config)?;
            if let Some(t) = &result.trace {
                for (eval, cost) in t {
                    println!("improvement at evaluation {eval}: {cost}");
                }
            }
            let report = cost_report(&inst, &result.best_tour)?;
            println!("evaluations: {}", result.evaluations_used);
            println!("weighted cost: {}", report.weighted);
            println!("tsp cost: {}", report.tsp);
            println!("latency: {}", report.latency);
            println!("tour: {}", result.best_tour);
            maybe_write_tour(&result.best_tour, inst.name(), &tour_out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Approx {
            instance,
            ktours,
            tsp_mode,
            selector,
            b_mode,
            grid_m,
            b,
            seed,
            c,
            bounded,
            orient,
            tour_out,
        } => {
            let inst = load(&instance)?;
            let ktour_mode = match ktours.as_str() {
                "exact" => KTourMode::Exact,
                "heuristic" => KTourMode::Heuristic,
                other => return Err(Error::InvalidParam(format!("unknown ktours '{other}'"))),
            };
            let tsp_mode = match tsp_mode.as_str() {
                "christofides" => TspMode::Christofides,
                "double-tree" => TspMode::DoubleTree,
                other => return Err(Error::InvalidParam(format!("unknown tsp-mode '{other}'"))),
            };
            let selector = match selector.as_str() {
                "sweep" => Selector::Sweep,
                "shortest-path" => Selector::ShortestPath,
                other => return Err(Error::InvalidParam(format!("unknown selector '{other}'"))),
            };
            let b_mode = match b_mode.as_str() {
                "grid" => BMode::Grid(grid_m),
                "random" => BMode::Random { seed },
                "fixed" => BMode::Fixed(b.ok_or_else(|| {
                    Error::InvalidParam("--b-mode fixed requires --b".into())
                })?),
                other => return Err(Error::InvalidParam(format!("unknown b-mode '{other}'"))),
            };
            let params = SweepParams { c, b_mode, selector };
            let tour = if bounded {
                approximate_bounded_weights(&inst, ktour_mode, tsp_mode, &params)?
            } else if inst.has_unit_weights() {
                let family = good_k_tours(&inst, ktour_mode, tsp_mode)?;
                concat_approximation(&inst, &family, &params)?
            } else {
                return Err(Error::InvalidParam(
                    "instance has non-unit weights; pass --bounded for the expansion pipeline"
                        .into(),
                ));
            };
            let tour = if orient { best_orientation(&inst, &tour)? } else { tour };
            let report = cost_report(&inst, &tour)?;
            println!("weighted cost: {}", report.weighted);
            println!("tsp cost: {}", report.tsp);
            println!("tour: {tour}");
            maybe_write_tour(&tour, inst.name(), &tour_out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Exact { instance, method, tour_out } => {
            let inst = load(&instance)?;
            let res = match method.as_str() {
                "brute" => brute_force_wtsp(&inst)?,
                "held-karp" => held_karp_wtsp(&inst)?,
                "tsp" => exact_tsp(&inst)?,
                "mlp" => exact_mlp(&inst)?,
                other => return Err(Error::InvalidParam(format!("unknown method '{other}'"))),
            };
            print_exact(&method, &res);
            maybe_write_tour(&res.tour, inst.name(), &tour_out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment { inputs, algos, runs, budget, seed, jobs, out, format: _ } => {
            if algos.is_empty() {
                return Err(Error::InvalidParam(
                    "provide --algos, e.g. rls-inversion-weighted".into(),
                ));
            }
            let algorithms: Vec<AlgorithmSpec> =
                algos.iter().map(|a| AlgorithmSpec::from_str(a)).collect::<Result<_>>()?;
            let spec = ExperimentSpec {
                instances: inputs.collect()?,
                algorithms,
                runs_per_instance: runs,
                budget: budget.to_spec()?,
                base_seed: seed,
                jobs,
            };
            let outcomes = run_experiment(&spec)?;
            let comment = report::schema_comment("results", &format!("seed={seed} runs={runs}"));
            let tours = save_experiment(&outcomes, &out, &comment)?;
            println!(
                "{} rows written to {} (tours in {})",
                outcomes.len(),
                out.display(),
                tours.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Ratio { inputs, runs, budget, seed, jobs, out, format: _ } => {
            let spec = ExperimentSpec {
                instances: inputs.collect()?,
                algorithms: Vec::new(), // the protocol fixes its own pair
                runs_per_instance: runs,
                budget: budget.to_spec()?,
                base_seed: seed,
                jobs,
            };
            let rows = driver_ratio_protocol(&spec)?;
            let comment = report::schema_comment("ratio", &format!("seed={seed} runs={runs}"));
            report::write_ratio_csv(&out, &rows, &comment)?;
            let summary = summarize_ratios(&rows);
            let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("ratio");
            let summary_path = out.with_file_name(format!("{stem}_summary.csv"));
            report::write_ratio_summary_csv(&summary_path, &summary, &comment)?;
            for s in &summary {
                println!(
                    "{} {} d={} n={}: median {:.4} (q1 {:.4}, q3 {:.4}, max {:.4}, {} runs)",
                    s.placement, s.class, s.d, s.n, s.median, s.q1, s.q3, s.max, s.count
                );
            }
            println!("rows in {}, summary in {}", out.display(), summary_path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Stats { results, out, format: _ } => {
            let rows = report::read_results_csv(&results)?;
            let (_, cells) = stats::compute_perf_table(&rows)?;
            let comment =
                report::schema_comment("perf", &format!("source={}", results.display()));
            report::write_perf_csv(&out, &cells, &comment)?;
            for cell in &cells {
                let beats: Vec<&str> = cell
                    .comparisons
                    .iter()
                    .filter(|c| c.significant)
                    .map(|c| c.other.as_str())
                    .collect();
                println!(
                    "{} d={} {}/{}: mean {:.2} std {:.2} median {:.2}{}",
                    cell.class,
                    cell.d,
                    cell.algorithm,
                    cell.fitness,
                    cell.mean,
                    cell.std,
                    cell.median,
                    if beats.is_empty() {
                        String::new()
                    } else {
                        format!(" beats {}", beats.join(", "))
                    }
                );
            }
            println!("perf table written to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Audit { instance, tour, csv, expected_weighted, expected_tsp } => {
            let inst = load(&instance)?;
            let t = read_tour(&tour)?;
            let report_values = audit_tour(&inst, &t)?;
            println!("weighted cost: {}", report_values.weighted);
            println!("tsp cost: {}", report_values.tsp);
            println!("latency: {}", report_values.latency);

            let (want_w, want_t) = if let Some(csv_path) = csv {
                let rows = report::read_results_csv(&csv_path)?;
                let file_name = tour
                    .file_name()
                    .and_then(|f| f.to_str())
                    .ok_or_else(|| Error::InvalidParam("tour path has no file name".into()))?;
                let row = rows
                    .iter()
                    .find(|r| r.tour_file == file_name)
                    .ok_or_else(|| {
                        Error::InvalidParam(format!("no CSV row references '{file_name}'"))
                    })?;
                (Some(row.weighted), Some(row.tsp))
            } else {
                (expected_weighted, expected_tsp)
            };

            match (want_w, want_t) {
                (None, None) => Ok(ExitCode::SUCCESS),
                (w, t_cost) => {
                    let ok = audit_matches(
                        &report_values,
                        w.unwrap_or(report_values.weighted),
                        t_cost.unwrap_or(report_values.tsp),
                    );
                    if ok {
                        println!("audit: OK");
                        Ok(ExitCode::SUCCESS)
                    } else {
                        println!("audit: MISMATCH");
                        Ok(ExitCode::from(3))
                    }
                }
            }
        }
    }
}
