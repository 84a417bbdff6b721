//! Benchmark matrix: seeded instances per (type, n, rho) cell, jump search at
//! one or more `K`, optional exact reference, averaged rows.
//!
//! Replication `r` of every cell uses generator seed `seed_base + r`, so the
//! cells of one size share their item draws across types and `rho`.

use std::io::{self, Write};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::heuristic::{jump_search, JumpSearchConfig};
use crate::instance::{generate, GeneratorConfig, InstanceKind};
use crate::oracle::{exact_ckp, MAX_EXACT_N};
use crate::report::{format_seconds, format_significant};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub kinds: Vec<InstanceKind>,
    pub sizes: Vec<usize>,
    pub rhos: Vec<f64>,
    pub reps: usize,
    pub seed_base: u64,
    pub levels: Vec<u32>,
    pub u: Option<u64>,
    pub v: u64,
    pub capacity_ratio: f64,
    pub with_oracle: bool,
    pub jobs: usize,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            kinds: vec![InstanceKind::Sc, InstanceKind::Ic, InstanceKind::Ss],
            sizes: vec![100, 500],
            rhos: vec![0.85, 0.90, 0.95],
            reps: 10,
            seed_base: 0,
            levels: vec![3],
            u: None,
            v: 10,
            capacity_ratio: GeneratorConfig::DEFAULT_CAPACITY_RATIO,
            with_oracle: false,
            jobs: 1,
        }
    }
}

impl BenchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.kinds.is_empty() || self.sizes.is_empty() || self.rhos.is_empty() {
            return Err(Error::validation("types, sizes and rhos must be non-empty"));
        }
        if self.levels.is_empty() {
            return Err(Error::validation("at least one K is required"));
        }
        if self.reps == 0 {
            return Err(Error::validation("reps must be at least 1"));
        }
        if self.kinds.contains(&InstanceKind::Custom) {
            return Err(Error::validation("benchmark types must be SC, IC or SS"));
        }
        for &levels in &self.levels {
            JumpSearchConfig {
                levels,
                u: self.u,
                v: self.v,
            }
            .validate()?;
        }
        if self.with_oracle {
            if let Some(&n) = self.sizes.iter().find(|&&n| n > MAX_EXACT_N) {
                return Err(Error::SizeGuard {
                    what: "benchmark oracle",
                    n,
                    limit: MAX_EXACT_N,
                });
            }
        }
        for &n in &self.sizes {
            for &rho in &self.rhos {
                GeneratorConfig::new(self.kinds[0], n, rho, 0)
                    .with_capacity_ratio(self.capacity_ratio)
                    .validate()?;
            }
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(InstanceKind, usize, f64)> {
        let mut cells = Vec::new();
        for &kind in &self.kinds {
            for &n in &self.sizes {
                for &rho in &self.rhos {
                    cells.push((kind, n, rho));
                }
            }
        }
        cells
    }
}

/// Averages over the replications of one (type, n, rho, K) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub name: String,
    pub kind: InstanceKind,
    pub n: usize,
    pub rho: f64,
    pub levels: u32,
    pub reps: usize,
    pub objective: f64,
    pub gamma: f64,
    pub knapsack_count: f64,
    pub wall_time_seconds: f64,
    pub exact_objective: Option<f64>,
    /// `100 (exact - objective) / exact`.
    pub gap_percent: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
struct RunOutcome {
    objective: u64,
    gamma: f64,
    knapsack_count: u64,
    seconds: f64,
}

struct TaskResult {
    runs: Vec<RunOutcome>,
    exact: Option<u64>,
}

fn run_task(spec: &BenchSpec, kind: InstanceKind, n: usize, rho: f64, rep: usize) -> Result<TaskResult> {
    let seed = spec.seed_base.wrapping_add(rep as u64);
    let inst = generate(&GeneratorConfig::new(kind, n, rho, seed).with_capacity_ratio(spec.capacity_ratio))?;
    let mut runs = Vec::with_capacity(spec.levels.len());
    for &levels in &spec.levels {
        let config = JumpSearchConfig {
            levels,
            u: spec.u,
            v: spec.v,
        };
        let start = Instant::now();
        let res = jump_search(&inst, &config)?;
        let seconds = start.elapsed().as_secs_f64();
        runs.push(RunOutcome {
            objective: res.objective(),
            gamma: res.gamma,
            knapsack_count: res.knapsack_count,
            seconds,
        });
    }
    let exact = if spec.with_oracle {
        Some(exact_ckp(&inst)?.objective)
    } else {
        None
    };
    Ok(TaskResult { runs, exact })
}

/// Runs the matrix on up to `spec.jobs` threads. Rows come out in
/// (type, n, rho, K) order regardless of scheduling.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    spec.validate()?;
    let cells = spec.cells();
    let tasks: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..spec.reps).map(move |r| (c, r)))
        .collect();
    let results: Mutex<Vec<Option<Result<TaskResult>>>> =
        Mutex::new((0..tasks.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = spec.jobs.clamp(1, tasks.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(c, rep)) = tasks.get(i) else { break };
                let (kind, n, rho) = cells[c];
                let out = run_task(spec, kind, n, rho, rep);
                results.lock().expect("result lock")[i] = Some(out);
            });
        }
    });

    let results: Vec<TaskResult> = results
        .into_inner()
        .expect("result lock")
        .into_iter()
        .map(|r| r.expect("every task ran"))
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (c, &(kind, n, rho)) in cells.iter().enumerate() {
        let cell = &results[c * spec.reps..(c + 1) * spec.reps];
        let reps = spec.reps as f64;
        let exact_objective = spec
            .with_oracle
            .then(|| cell.iter().map(|t| t.exact.unwrap_or(0) as f64).sum::<f64>() / reps);
        for (k, &levels) in spec.levels.iter().enumerate() {
            let mean = |f: fn(&RunOutcome) -> f64| cell.iter().map(|t| f(&t.runs[k])).sum::<f64>() / reps;
            let objective = mean(|r| r.objective as f64);
            let gap_percent = exact_objective.map(|e| {
                if e > 0.0 {
                    100.0 * (e - objective) / e
                } else {
                    0.0
                }
            });
            rows.push(BenchRow {
                name: format!("{}-n{}-rho{}", kind.label(), n, rho),
                kind,
                n,
                rho,
                levels,
                reps: spec.reps,
                objective,
                gamma: mean(|r| r.gamma),
                knapsack_count: mean(|r| r.knapsack_count as f64),
                wall_time_seconds: mean(|r| r.seconds),
                exact_objective,
                gap_percent,
            });
        }
    }
    Ok(rows)
}

pub const BENCH_HEADER: &str =
    "name,type,n,rho,K,reps,obj,time,gamma,knapsack,exact_obj,gap_percent";

pub fn write_bench_csv<W: Write>(mut out: W, rows: &[BenchRow]) -> io::Result<()> {
    writeln!(out, "{BENCH_HEADER}")?;
    let opt = |x: Option<f64>| x.map(|v| format_significant(v, 6)).unwrap_or_default();
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.name,
            r.kind,
            r.n,
            format_significant(r.rho, 6),
            r.levels,
            r.reps,
            format_significant(r.objective, 6),
            format_seconds(r.wall_time_seconds),
            format_significant(r.gamma, 6),
            format_significant(r.knapsack_count, 6),
            opt(r.exact_objective),
            opt(r.gap_percent),
        )?;
    }
    Ok(())
}
