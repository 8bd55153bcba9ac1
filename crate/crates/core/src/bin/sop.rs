use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use sop_search::harness::{write_jsonl, write_summary_csv, BestKnown, RunRecord};
use sop_search::strategies::{new_database, solve_with};
use sop_search::{run_matrix, BoundKind, Instance, SearchConfig, Strategy};

#[derive(Parser)]
#[command(
    name = "sop",
    version,
    about = "Tree search solver for the Sequential Ordering Problem"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance with one configuration
    Solve(SolveArgs),
    /// Run a strategy x bound x equivalence matrix over a set of instances
    Bench(BenchArgs),
    /// Write a seeded random instance in TSPLIB layout
    Generate {
        n: usize,
        max_cost: i64,
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Human,
    Json,
    Csv,
}

#[derive(clap::Args)]
struct SearchArgs {
    /// Per-run wall-clock limit in seconds
    #[arg(long, env = "SOP_TIME_LIMIT", default_value_t = 600.0)]
    time_limit: f64,
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long, default_value_t = 1)]
    beam_init: u64,
    #[arg(long, default_value_t = 2)]
    beam_growth: u64,
    #[arg(long, default_value_t = 1)]
    lds_init: u64,
    /// Maximum number of equivalence table entries
    #[arg(long)]
    db_capacity: Option<usize>,
}

impl SearchArgs {
    fn apply(&self, mut config: SearchConfig) -> Result<SearchConfig> {
        if self.time_limit.is_nan() || self.time_limit <= 0.0 {
            bail!("--time-limit must be positive");
        }
        config.time_limit = Some(Duration::from_secs_f64(self.time_limit));
        config.node_limit = self.node_limit;
        config.beam_init = self.beam_init;
        config.beam_growth = self.beam_growth;
        config.lds_init = self.lds_init;
        config.db_capacity = self.db_capacity;
        config.validate()?;
        Ok(config)
    }
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Instance file, or `gen:<n>:<max_cost>:<density>` for a generated one
    instance: String,
    #[arg(long, default_value = "beam", value_parser = parse_strategy)]
    strategy: Strategy,
    #[arg(long, default_value = "prefix", value_parser = parse_bound)]
    bound: BoundKind,
    /// Enable prefix equivalence cuts (default)
    #[arg(long, overrides_with = "no_pe")]
    pe: bool,
    /// Disable prefix equivalence cuts
    #[arg(long)]
    no_pe: bool,
    /// Seed for generated instances
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "human")]
    output: OutputFormat,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Instance files or directories containing `.sop` files
    #[arg(required = true)]
    instances: Vec<PathBuf>,
    /// Semicolon-separated descriptors such as `BS,PE,P;DFS,PE,P`
    #[arg(
        long,
        default_value = "BS,PE,P;BS,PE,IO;BS,PE,MST;BS,P;DFS,PE,P;LDS,PE,P"
    )]
    configs: String,
    /// Run all 18 strategy x bound x equivalence combinations
    #[arg(long, conflicts_with = "configs")]
    all: bool,
    #[arg(long, default_value = "bench-out")]
    out_dir: PathBuf,
    /// CSV of best-known values; the bundled table is used otherwise
    #[arg(long)]
    best_known: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    search: SearchArgs,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

fn parse_bound(s: &str) -> Result<BoundKind, String> {
    s.parse()
}

fn load_instance(spec: &str, seed: u64) -> Result<Instance> {
    if let Some(rest) = spec.strip_prefix("gen:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [n, max_cost, density] = parts.as_slice() else {
            bail!("expected gen:<n>:<max_cost>:<density>, got {spec:?}");
        };
        let n: usize = n.parse().context("vertex count")?;
        if n < 2 {
            bail!("a generated instance needs at least 2 vertices");
        }
        return Ok(Instance::generate_random(
            n,
            max_cost.parse()?,
            density.parse()?,
            seed,
        ));
    }
    Instance::from_file(spec).with_context(|| format!("cannot load instance {spec}"))
}

fn solve_cmd(args: SolveArgs) -> Result<ExitCode> {
    let inst = load_instance(&args.instance, args.seed)?;
    let use_pe = !args.no_pe || args.pe;
    let config = args
        .search
        .apply(SearchConfig::new(args.strategy, args.bound, use_pe))?;
    let human = matches!(args.output, OutputFormat::Human);
    for d in inst.diagnostics() {
        eprintln!("warning: {d}");
    }
    let mut db = new_database(&config);
    let report = solve_with(&inst, &config, &mut db, &mut |point, _| {
        let line = format!("incumbent {:.3}s {}", point.elapsed, point.value);
        if human {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    });
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match args.output {
        OutputFormat::Human => {
            writeln!(
                out,
                "instance    {} ({} vertices)",
                report.instance,
                inst.len()
            )?;
            writeln!(out, "config      {}", report.config)?;
            writeln!(
                out,
                "value       {}",
                report
                    .best_value
                    .map_or_else(|| "-".to_string(), |v| v.to_string())
            )?;
            writeln!(out, "proven      {}", report.optimal_proven)?;
            if let Some(p) = &report.best_permutation {
                let order: Vec<String> = p.iter().map(usize::to_string).collect();
                writeln!(out, "permutation {}", order.join(" "))?;
            }
            let c = &report.counters;
            writeln!(
                out,
                "nodes       opened {} / cut: bound {}, equivalence {}, heuristic {}",
                c.nodes_opened, c.nodes_cut_bound, c.nodes_cut_equivalence, c.nodes_cut_heuristic
            )?;
            writeln!(out, "elapsed     {:.3}s", report.elapsed)?;
        }
        OutputFormat::Json => {
            serde_json::to_writer(
                &mut out,
                &RunRecord::from_report(&report, Some(&BestKnown::bundled())),
            )?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            let rec = RunRecord::from_report(&report, Some(&BestKnown::bundled()));
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record([
                "instance",
                "config",
                "value",
                "optimal",
                "time_to_best",
                "time_to_proof",
                "nodes_opened",
            ])?;
            w.write_record([
                rec.instance.clone(),
                rec.config.clone(),
                rec.value_label(),
                rec.optimal.to_string(),
                rec.time_to_best
                    .map_or_else(|| "-".into(), |t| format!("{t:.3}")),
                rec.time_to_proof
                    .map_or_else(|| "-".into(), |t| format!("{t:.3}")),
                rec.nodes_opened.to_string(),
            ])?;
            w.flush()?;
        }
    }
    if report.infeasible {
        eprintln!("error: instance has no feasible solution");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn collect_instances(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = vec![];
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "sop"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    if files.is_empty() {
        bail!("no instance files found");
    }
    Ok(files)
}

fn bench_cmd(args: BenchArgs) -> Result<ExitCode> {
    let configs: Vec<SearchConfig> = if args.all {
        SearchConfig::all_combinations()
    } else {
        args.configs
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(SearchConfig::from_descriptor)
            .collect::<Result<_, _>>()?
    };
    let configs = configs
        .into_iter()
        .map(|c| args.search.apply(c))
        .collect::<Result<Vec<_>>>()?;
    let best_known = match &args.best_known {
        Some(p) => {
            BestKnown::from_path(p).with_context(|| format!("cannot read {}", p.display()))?
        }
        None => BestKnown::bundled(),
    };
    let mut instances = vec![];
    for file in collect_instances(&args.instances)? {
        match Instance::from_file(&file) {
            Ok(inst) => instances.push(inst),
            Err(e) => eprintln!("skipping {}: {e}", file.display()),
        }
    }
    if instances.is_empty() {
        bail!("no instance could be loaded");
    }
    let matrix = run_matrix(&instances, &configs, None, args.jobs);
    fs::create_dir_all(&args.out_dir)?;
    let records: Vec<RunRecord> = matrix
        .cells
        .iter()
        .map(|c| RunRecord::from_report(&c.report, Some(&best_known)))
        .collect();
    write_jsonl(
        io::BufWriter::new(fs::File::create(args.out_dir.join("records.jsonl"))?),
        &records,
    )?;
    write_summary_csv(
        fs::File::create(args.out_dir.join("summary.csv"))?,
        &matrix,
        Some(&best_known),
    )?;
    print!("{matrix}");
    println!("records written to {}", display(&args.out_dir));
    Ok(ExitCode::SUCCESS)
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve_cmd(args),
        Command::Bench(args) => bench_cmd(args),
        Command::Generate {
            n,
            max_cost,
            density,
            seed,
        } => {
            if n < 2 {
                eprintln!("error: a generated instance needs at least 2 vertices");
                return ExitCode::FAILURE;
            }
            print!(
                "{}",
                Instance::generate_random(n, max_cost, density, seed).to_tsplib_string()
            );
            Ok(ExitCode::SUCCESS)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
