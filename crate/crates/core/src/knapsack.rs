//! Exact 0/1 knapsack over integer weights, and the conservative rule that
//! turns real weights into integers.
//!
//! The solver is a dynamic program over profit values: `row[q]` holds the
//! least weight that reaches profit exactly `q`. The table runs up to the
//! Dantzig (LP relaxation) bound, so the cost is `O(n U)` with `U` that bound.
//! Among optimal selections the lexicographically smallest one is returned,
//! i.e. earlier items are left out whenever an optimal completion without them
//! exists. That needs suffix rows of the table; they are kept at `sqrt(n)`
//! checkpoints and recomputed block by block during reconstruction.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Multiplier applied before rounding real weights to integers.
pub const DEFAULT_SCALE: u64 = 1_000_000;

/// Largest profit table the solver will allocate.
const MAX_TABLE: u64 = 1 << 27;

const INF: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NominalKnapsack {
    profits: Vec<u64>,
    weights: Vec<u64>,
    capacity: u64,
}

impl NominalKnapsack {
    pub fn new(profits: Vec<u64>, weights: Vec<u64>, capacity: u64) -> Result<Self> {
        if profits.len() != weights.len() {
            return Err(Error::validation(format!(
                "{} profits but {} weights",
                profits.len(),
                weights.len()
            )));
        }
        profits
            .iter()
            .try_fold(0u64, |acc, &p| acc.checked_add(p))
            .ok_or_else(|| Error::Overflow("profit sum exceeds 64 bits".into()))?;
        Ok(NominalKnapsack {
            profits,
            weights,
            capacity,
        })
    }

    pub fn profits(&self) -> &[u64] {
        &self.profits
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.profits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profits.is_empty()
    }

    /// Items that can appear in some optimal solution: positive profit and a
    /// weight that fits on its own.
    fn useful(&self, j: usize) -> bool {
        self.profits[j] > 0 && self.weights[j] <= self.capacity
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackSolution {
    pub selection: Vec<bool>,
    pub objective: u64,
}

/// Counters for exact knapsack solves. Callers own their counters; parallel
/// workers keep separate ones and [`merge`](SolveStats::merge) them.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolveStats {
    pub knapsack_count: u64,
    pub wall_time: Duration,
}

impl SolveStats {
    pub fn merge(&mut self, other: &SolveStats) {
        self.knapsack_count += other.knapsack_count;
        self.wall_time += other.wall_time;
    }

    fn record(&mut self, started: Instant) {
        self.knapsack_count += 1;
        self.wall_time += started.elapsed();
    }
}

/// Floor of the LP relaxation optimum, computed in exact integer arithmetic.
fn dantzig_bound(problem: &NominalKnapsack) -> u64 {
    let mut order: Vec<usize> = (0..problem.len()).filter(|&j| problem.useful(j)).collect();
    let (p, w) = (&problem.profits, &problem.weights);
    // Descending profit/weight; zero weights come first.
    order.sort_by(|&a, &b| {
        let lhs = p[a] as u128 * w[b] as u128;
        let rhs = p[b] as u128 * w[a] as u128;
        rhs.cmp(&lhs).then(a.cmp(&b))
    });
    let mut room = problem.capacity;
    let mut total = 0u64;
    for j in order {
        if w[j] <= room {
            room -= w[j];
            total += p[j];
        } else {
            total += (p[j] as u128 * room as u128 / w[j] as u128) as u64;
            break;
        }
    }
    total
}

fn table_len(problem: &NominalKnapsack) -> Result<usize> {
    let bound = dantzig_bound(problem);
    if bound >= MAX_TABLE {
        return Err(Error::Overflow(format!(
            "profit bound {bound} exceeds the DP table limit {MAX_TABLE}"
        )));
    }
    Ok(bound as usize + 1)
}

fn empty_row(len: usize) -> Vec<u64> {
    let mut row = vec![INF; len];
    row[0] = 0;
    row
}

fn add_item(row: &mut [u64], profit: usize, weight: u64) {
    if profit >= row.len() {
        return;
    }
    for q in (profit..row.len()).rev() {
        let cand = row[q - profit].saturating_add(weight);
        if cand < row[q] {
            row[q] = cand;
        }
    }
}

fn best_profit(row: &[u64], capacity: u64) -> u64 {
    row.iter().rposition(|&w| w <= capacity).unwrap_or(0) as u64
}

/// Optimal objective only. Counts as one solve.
pub fn optimum_value(problem: &NominalKnapsack, stats: &mut SolveStats) -> Result<u64> {
    let started = Instant::now();
    let len = table_len(problem)?;
    let mut row = empty_row(len);
    for j in 0..problem.len() {
        if problem.useful(j) {
            add_item(&mut row, problem.profits[j] as usize, problem.weights[j]);
        }
    }
    let best = best_profit(&row, problem.capacity);
    stats.record(started);
    Ok(best)
}

/// Exact optimum with the lexicographically smallest optimal selection.
pub fn solve_01(problem: &NominalKnapsack, stats: &mut SolveStats) -> Result<KnapsackSolution> {
    let started = Instant::now();
    let n = problem.len();
    let len = table_len(problem)?;
    let block = ((n as f64).sqrt().ceil() as usize).max(1);

    let apply = |row: &mut Vec<u64>, j: usize| {
        if problem.useful(j) {
            add_item(row, problem.profits[j] as usize, problem.weights[j]);
        }
    };

    // checkpoints[k] holds the row for items k*block.., the last one for the
    // empty suffix.
    let n_blocks = n.div_ceil(block);
    let mut checkpoints: Vec<Vec<u64>> = vec![Vec::new(); n_blocks + 1];
    let mut row = empty_row(len);
    checkpoints[n_blocks] = row.clone();
    for j in (0..n).rev() {
        apply(&mut row, j);
        if j % block == 0 {
            checkpoints[j / block] = row.clone();
        }
    }
    let objective = best_profit(&row, problem.capacity);
    drop(row);

    let mut selection = vec![false; n];
    let mut target = objective as usize;
    let mut room = problem.capacity;
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(block);
    'blocks: for k in 0..n_blocks {
        if target == 0 {
            break;
        }
        let start = k * block;
        let end = (start + block).min(n);
        // rows[i] = suffix row for items start+1+i.. (i in 0..end-start).
        rows.clear();
        let mut cur = checkpoints[k + 1].clone();
        rows.push(cur.clone());
        for j in (start + 1..end).rev() {
            apply(&mut cur, j);
            rows.push(cur.clone());
        }
        rows.reverse();
        for j in start..end {
            let rest = &rows[j - start];
            if rest[target] > room {
                selection[j] = true;
                target -= problem.profits[j] as usize;
                room -= problem.weights[j];
                if target == 0 {
                    break 'blocks;
                }
            }
        }
    }
    debug_assert_eq!(target, 0);
    stats.record(started);
    Ok(KnapsackSolution {
        selection,
        objective,
    })
}

/// Integer weights and capacity produced by [`scale_weights`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledWeights {
    pub weights: Vec<u64>,
    pub capacity: u64,
}

/// Weights are multiplied by `factor` and rounded up, the capacity rounded
/// down, so any selection feasible after scaling is feasible before it.
pub fn scale_weights(weights: &[f64], capacity: f64, factor: u64) -> Result<ScaledWeights> {
    if factor == 0 {
        return Err(Error::validation("scale factor must be at least 1"));
    }
    let f = factor as f64;
    let convert = |x: f64, what: &str| -> Result<f64> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::validation(format!(
                "{what} must be finite and non-negative, got {x}"
            )));
        }
        let scaled = x * f;
        // 2^64 is exactly representable; anything at or above it overflows.
        if scaled >= 18_446_744_073_709_551_616.0 {
            return Err(Error::Overflow(format!("{what} {x} scaled by {factor}")));
        }
        Ok(scaled)
    };
    let weights = weights
        .iter()
        .map(|&w| convert(w, "weight").map(|s| s.ceil() as u64))
        .collect::<Result<Vec<_>>>()?;
    let capacity = convert(capacity, "capacity")?.floor() as u64;
    Ok(ScaledWeights { weights, capacity })
}
