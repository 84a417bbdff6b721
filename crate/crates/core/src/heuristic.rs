//! Jump search over the uncertainty budget, and budget sweeps.
//!
//! The search probes `gamma = 0, m_1, 2 m_1, ...` with `m_1 = n / u` until the
//! robust optimum meets the chance constraint. Unless that happens at the
//! last level `K`, it steps back by one step, divides the step by `v` and
//! resumes. Probes at level `k` are the multiples of `n / (u v^(k-1))`; they
//! are tracked as integer ticks so a budget revisited at a finer level is
//! bit-identical to the first visit.

use std::time::Duration;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::knapsack::SolveStats;
use crate::polymatroid::{self, PiBounds};
use crate::robust::{self, RobustProblem, RobustSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JumpSearchConfig {
    /// Number of refinement levels `K`.
    pub levels: u32,
    /// Coarse step divisor; `None` means `u = n`, so the first step is 1.
    pub u: Option<u64>,
    /// Step shrink factor between levels.
    pub v: u64,
}

impl Default for JumpSearchConfig {
    fn default() -> Self {
        JumpSearchConfig {
            levels: 3,
            u: None,
            v: 10,
        }
    }
}

impl JumpSearchConfig {
    pub fn with_levels(levels: u32) -> Self {
        JumpSearchConfig {
            levels,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels == 0 {
            return Err(Error::validation("K must be at least 1"));
        }
        if self.u == Some(0) {
            return Err(Error::validation("u must be at least 1"));
        }
        if self.v < 2 {
            return Err(Error::validation("v must be at least 2"));
        }
        Ok(())
    }

    /// Tick denominators `u v^(k-1)` for every level, checked so that
    /// `n * ticks` stays exactly representable in an `f64`.
    fn denominators(&self, n: usize) -> Result<Vec<u64>> {
        const EXACT: u128 = 1 << 52;
        let mut denom = self.u.unwrap_or(n as u64);
        let mut out = Vec::with_capacity(self.levels as usize);
        for k in 0..self.levels {
            if k > 0 {
                denom = denom
                    .checked_mul(self.v)
                    .ok_or_else(|| Error::validation("step sizes underflow: lower K or v"))?;
            }
            if (denom as u128 + 1) * n as u128 >= EXACT {
                return Err(Error::validation("step sizes underflow: lower K or v"));
            }
            out.push(denom);
        }
        Ok(out)
    }
}

/// One evaluated budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub gamma: f64,
    pub objective: u64,
    pub h: f64,
    pub feasible: bool,
    /// Refinement level (1-based) the probe belongs to.
    pub level: u32,
    pub knapsack_count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpSearchResult {
    pub gamma: f64,
    pub solution: RobustSolution,
    pub knapsack_count: u64,
    pub gamma_trace: Vec<Probe>,
    /// Time spent inside knapsack solves.
    pub solve_time: Duration,
}

impl JumpSearchResult {
    pub fn objective(&self) -> u64 {
        self.solution.objective
    }
}

pub fn jump_search(inst: &Instance, config: &JumpSearchConfig) -> Result<JumpSearchResult> {
    config.validate()?;
    let n = inst.n();
    let denoms = config.denominators(n)?;
    let bounds = polymatroid::pi_bounds(inst);

    let mut trace = Vec::new();
    let mut stats = SolveStats::default();
    let mut level = 0usize;
    let mut ticks = 0u64;
    loop {
        let denom = denoms[level];
        let past_end = ticks > denom;
        let gamma = if past_end {
            n as f64
        } else {
            (n as u128 * ticks as u128) as f64 / denom as f64
        };
        let (solution, probe) = evaluate(inst, &bounds, gamma, level as u32 + 1, &mut stats)?;
        trace.push(probe);

        if probe.feasible {
            if level + 1 == denoms.len() || ticks == 0 || past_end {
                return Ok(JumpSearchResult {
                    gamma,
                    solution,
                    knapsack_count: stats.knapsack_count,
                    gamma_trace: trace,
                    solve_time: stats.wall_time,
                });
            }
            ticks = (ticks - 1) * config.v;
            level += 1;
        } else if past_end {
            return Err(Error::Infeasible(format!(
                "robust optimum at gamma = n has h = {} > b = {}",
                probe.h,
                inst.capacity()
            )));
        }
        ticks += 1;
    }
}

fn evaluate(
    inst: &Instance,
    bounds: &PiBounds,
    gamma: f64,
    level: u32,
    stats: &mut SolveStats,
) -> Result<(RobustSolution, Probe)> {
    let problem = RobustProblem::with_bounds(inst, bounds, gamma)?;
    let mut local = SolveStats::default();
    let solution = robust::solve_rkp(&problem, &mut local)?;
    stats.merge(&local);
    let probe = Probe {
        gamma,
        objective: solution.objective,
        h: solution.h,
        feasible: solution.ckp_feasible,
        level,
        knapsack_count: local.knapsack_count,
    };
    Ok((solution, probe))
}

/// One row of a budget sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub gamma: f64,
    pub objective: u64,
    pub h_star: f64,
    pub feasible: bool,
}

/// Solves the robust problem independently at every budget in `grid`.
pub fn sweep(inst: &Instance, grid: &[f64]) -> Result<Vec<SweepRecord>> {
    let bounds = polymatroid::pi_bounds(inst);
    let mut stats = SolveStats::default();
    grid.iter()
        .map(|&gamma| {
            let (_, probe) = evaluate(inst, &bounds, gamma, 1, &mut stats)?;
            Ok(SweepRecord {
                gamma,
                objective: probe.objective,
                h_star: probe.h,
                feasible: probe.feasible,
            })
        })
        .collect()
}

/// `0, step, 2 step, ...` up to `max` inclusive (with a small tolerance so
/// that `max = 10, step = 0.1` yields 101 points).
pub fn gamma_grid(max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::validation(format!("gamma step must be positive, got {step}")));
    }
    if !(max >= 0.0 && max.is_finite()) {
        return Err(Error::validation(format!("gamma max must be non-negative, got {max}")));
    }
    let count = (max / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| (i as f64 * step).min(max)).collect())
}
