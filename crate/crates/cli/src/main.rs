//! `ckp`: generate instances, run the jump-search heuristic, sweep the
//! uncertainty budget and run benchmark matrices.
//!
//! Exit codes: 0 success, 1 solver failure, 2 usage error, 3 I/O or parse
//! error, 4 size-guard refusal.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use ckp_core::bench::{run_bench, write_bench_csv, BenchSpec};
use ckp_core::heuristic::gamma_grid;
use ckp_core::instance::{self, GeneratorConfig, Instance, InstanceKind};
use ckp_core::report::{format_seconds, format_significant, write_sweep_csv};
use ckp_core::{exact_ckp, jump_search, sweep, Error, JumpSearchConfig};

#[derive(Parser)]
#[command(name = "ckp", version, about = "Chance-constrained knapsack solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Sc,
    Ic,
    Ss,
}

impl From<Kind> for InstanceKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Sc => InstanceKind::Sc,
            Kind::Ic => InstanceKind::Ic,
            Kind::Ss => InstanceKind::Ss,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded SC/IC/SS instance file.
    Generate {
        #[arg(long = "type", value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = GeneratorConfig::DEFAULT_CAPACITY_RATIO)]
        capacity_ratio: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the jump search on an instance file.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        /// Refinement levels.
        #[arg(long = "K", default_value_t = 3)]
        levels: u32,
        /// Coarse step divisor (default: n).
        #[arg(long)]
        u: Option<u64>,
        #[arg(long, default_value_t = 10)]
        v: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also solve exactly by enumeration (n <= 22) and report the gap.
        #[arg(long)]
        exact: bool,
    },
    /// Solve the robust problem over a grid of budgets and write CSV rows.
    Sweep {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        gamma_max: f64,
        #[arg(long)]
        gamma_step: f64,
        /// Output path; stdout when omitted or `-`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the benchmark matrix and write averaged CSV rows.
    Bench {
        #[arg(long, value_enum, value_delimiter = ',', default_value = "sc,ic,ss")]
        types: Vec<Kind>,
        #[arg(long, value_delimiter = ',', default_value = "100,500")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.85,0.90,0.95")]
        rhos: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed_base: u64,
        #[arg(long = "K", default_value_t = 3)]
        levels: u32,
        /// Sweep several K values per instance (overrides --K).
        #[arg(long = "K-list", value_delimiter = ',')]
        level_list: Option<Vec<u32>>,
        #[arg(long)]
        u: Option<u64>,
        #[arg(long, default_value_t = 10)]
        v: u64,
        #[arg(long, default_value_t = GeneratorConfig::DEFAULT_CAPACITY_RATIO)]
        capacity_ratio: f64,
        /// Solve every instance exactly too (sizes up to 22 only).
        #[arg(long)]
        with_oracle: bool,
        #[arg(long, env = "CKP_JOBS", default_value_t = 1)]
        jobs: usize,
        /// Output path; stdout when omitted or `-`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Core(Error),
    Io(PathBuf, io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::Validation(_) | Error::Domain(_)) => 2,
            Failure::Core(Error::Io { .. } | Error::Parse(_)) | Failure::Io(..) => 3,
            Failure::Core(Error::SizeGuard { .. }) => 4,
            Failure::Core(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(path, e) => write!(f, "I/O error on {}: {e}", path.display()),
        }
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate {
            kind,
            n,
            rho,
            seed,
            capacity_ratio,
            out,
        } => run_generate(
            GeneratorConfig::new(kind.into(), n, rho, seed).with_capacity_ratio(capacity_ratio),
            &out,
        ),
        Command::Solve {
            input,
            levels,
            u,
            v,
            format,
            exact,
        } => run_solve(&input, JumpSearchConfig { levels, u, v }, format, exact),
        Command::Sweep {
            input,
            gamma_max,
            gamma_step,
            out,
        } => run_sweep(&input, gamma_max, gamma_step, out.as_deref()),
        Command::Bench {
            types,
            sizes,
            rhos,
            reps,
            seed_base,
            levels,
            level_list,
            u,
            v,
            capacity_ratio,
            with_oracle,
            jobs,
            out,
        } => run_bench_cmd(
            BenchSpec {
                kinds: types.into_iter().map(Into::into).collect(),
                sizes,
                rhos,
                reps,
                seed_base,
                levels: level_list.unwrap_or_else(|| vec![levels]),
                u,
                v,
                capacity_ratio,
                with_oracle,
                jobs,
            },
            out.as_deref(),
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ckp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) if p.as_os_str() == "-" => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| Failure::Io(p.to_path_buf(), e)),
    }
}

fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> Failure + '_ {
    move |e| Failure::Io(path.map_or_else(|| PathBuf::from("-"), Path::to_path_buf), e)
}

fn run_generate(config: GeneratorConfig, out: &Path) -> CliResult {
    let inst = instance::generate(&config)?;
    let text = inst.to_json();
    std::fs::write(out, &text).map_err(|e| Failure::Io(out.to_path_buf(), e))?;
    let digest = Sha256::digest(text.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    println!("wrote {} ({} items)", out.display(), inst.n());
    println!("capacity: {}", inst.capacity());
    println!("sha256: {hex}");
    Ok(())
}

#[derive(Serialize)]
struct SolveReport {
    instance: String,
    n: usize,
    rho: f64,
    capacity: f64,
    #[serde(rename = "K")]
    levels: u32,
    u: u64,
    v: u64,
    objective: u64,
    gamma: f64,
    h: f64,
    feasible: bool,
    knapsack_count: u64,
    wall_time_seconds: f64,
    selection: Vec<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_objective: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gap_percent: Option<f64>,
}

fn load(path: &Path) -> Result<Instance, Failure> {
    Ok(instance::load(path)?)
}

fn run_solve(input: &Path, config: JumpSearchConfig, format: Format, exact: bool) -> CliResult {
    let inst = load(input)?;
    let start = Instant::now();
    let res = jump_search(&inst, &config)?;
    let wall = start.elapsed().as_secs_f64();
    let exact_objective = if exact {
        Some(exact_ckp(&inst)?.objective)
    } else {
        None
    };
    let gap_percent = exact_objective.map(|e| {
        if e == 0 {
            0.0
        } else {
            100.0 * (e - res.objective()) as f64 / e as f64
        }
    });
    let report = SolveReport {
        instance: inst.name().to_string(),
        n: inst.n(),
        rho: inst.rho(),
        capacity: inst.capacity(),
        levels: config.levels,
        u: config.u.unwrap_or(inst.n() as u64),
        v: config.v,
        objective: res.objective(),
        gamma: res.gamma,
        h: res.solution.h,
        feasible: res.solution.ckp_feasible,
        knapsack_count: res.knapsack_count,
        wall_time_seconds: wall,
        selection: res.solution.selection.iter().map(|&x| x as u8).collect(),
        exact_objective,
        gap_percent,
    };
    let mut out = io::stdout().lock();
    let write = |out: &mut dyn Write| -> io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &report)?;
                writeln!(out)
            }
            Format::Csv => write_solve_csv(out, &report),
            Format::Text => write_solve_text(out, &report),
        }
    };
    write(&mut out).map_err(io_err(None))
}

fn selected_indices(report: &SolveReport) -> Vec<String> {
    report
        .selection
        .iter()
        .enumerate()
        .filter(|(_, &x)| x == 1)
        .map(|(j, _)| j.to_string())
        .collect()
}

fn write_solve_csv(out: &mut dyn Write, r: &SolveReport) -> io::Result<()> {
    writeln!(
        out,
        "instance,n,rho,K,objective,gamma,h,capacity,feasible,knapsack_count,wall_time_seconds,exact_objective,gap_percent,selected"
    )?;
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.instance,
        r.n,
        format_significant(r.rho, 6),
        r.levels,
        r.objective,
        format_significant(r.gamma, 6),
        format_significant(r.h, 6),
        format_significant(r.capacity, 6),
        r.feasible,
        r.knapsack_count,
        format_seconds(r.wall_time_seconds),
        r.exact_objective.map(|e| e.to_string()).unwrap_or_default(),
        r.gap_percent.map(|g| format_significant(g, 6)).unwrap_or_default(),
        selected_indices(r).join(" "),
    )
}

fn write_solve_text(out: &mut dyn Write, r: &SolveReport) -> io::Result<()> {
    writeln!(out, "instance:        {} (n = {}, rho = {}, b = {})", r.instance, r.n, r.rho, r.capacity)?;
    writeln!(out, "search:          K = {}, u = {}, v = {}", r.levels, r.u, r.v)?;
    writeln!(out, "objective:       {}", r.objective)?;
    writeln!(out, "gamma:           {}", format_significant(r.gamma, 6))?;
    writeln!(out, "h:               {}", format_significant(r.h, 10))?;
    writeln!(out, "feasible:        {}", r.feasible)?;
    writeln!(out, "knapsack solves: {}", r.knapsack_count)?;
    writeln!(out, "wall time (s):   {}", format_seconds(r.wall_time_seconds))?;
    if let (Some(e), Some(g)) = (r.exact_objective, r.gap_percent) {
        writeln!(out, "exact objective: {e} (gap {}%)", format_significant(g, 6))?;
    }
    writeln!(out, "selected items:  {}", selected_indices(r).join(" "))
}

fn run_sweep(input: &Path, gamma_max: f64, gamma_step: f64, out: Option<&Path>) -> CliResult {
    let inst = load(input)?;
    if gamma_max > inst.n() as f64 {
        return Err(Error::Validation(format!(
            "gamma max {gamma_max} exceeds n = {}",
            inst.n()
        ))
        .into());
    }
    let grid = gamma_grid(gamma_max, gamma_step)?;
    let records = sweep(&inst, &grid)?;
    let mut w = open_output(out)?;
    write_sweep_csv(&mut w, &records)
        .and_then(|_| w.flush())
        .map_err(io_err(out))
}

fn run_bench_cmd(spec: BenchSpec, out: Option<&Path>) -> CliResult {
    let rows = run_bench(&spec)?;
    let mut w = open_output(out)?;
    write_bench_csv(&mut w, &rows)
        .and_then(|_| w.flush())
        .map_err(io_err(out))
}
