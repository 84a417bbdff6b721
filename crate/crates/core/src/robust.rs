//! Robust knapsack with a budgeted uncertainty set over the polymatroid
//! weight intervals.
//!
//! Each item weight may move from `lower_j` up to `upper_j`; at most `gamma`
//! units of total deviation mass are adversarial (`floor(gamma)` items fully,
//! one more by the fractional remainder). With items ranked by deviation
//! `d_1 >= ... >= d_n` and `d_{n+1} = 0`, the robust problem is the best of
//! `n + 1` nominal knapsacks
//!
//! ```text
//! g_l = max p.x  s.t.  sum_j lower_j x_j + sum_{rank(j) <= l} (d_j - d_l) x_j <= b - gamma d_l
//! ```
//!
//! Every `g_l` restricts the robust feasible set, and their union is exactly
//! that set (the dual of the protection term attains its optimum at a
//! breakpoint `d_l`), so the robust optimum is `max_l g_l`.

use std::borrow::Cow;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::knapsack::{self, NominalKnapsack, SolveStats, DEFAULT_SCALE};
use crate::numeric::CompensatedSum;
use crate::polymatroid::{self, within_capacity, PiBounds};

/// Largest instance [`brute_force_rkp`] will enumerate.
pub const MAX_BRUTE_FORCE_N: usize = 20;

#[derive(Debug, Clone)]
pub struct RobustProblem<'a> {
    instance: &'a Instance,
    bounds: Cow<'a, PiBounds>,
    gamma: f64,
}

impl<'a> RobustProblem<'a> {
    /// Robust problem over the instance's own polymatroid bounds.
    pub fn new(instance: &'a Instance, gamma: f64) -> Result<Self> {
        check_gamma(gamma, instance.n())?;
        Ok(RobustProblem {
            instance,
            bounds: Cow::Owned(polymatroid::pi_bounds(instance)),
            gamma,
        })
    }

    /// Reuses precomputed bounds, e.g. across the probes of a search.
    pub fn with_bounds(instance: &'a Instance, bounds: &'a PiBounds, gamma: f64) -> Result<Self> {
        check_gamma(gamma, instance.n())?;
        if bounds.len() != instance.n() {
            return Err(Error::validation(format!(
                "{} bounds for {} items",
                bounds.len(),
                instance.n()
            )));
        }
        Ok(RobustProblem {
            instance,
            bounds: Cow::Borrowed(bounds),
            gamma,
        })
    }

    pub fn instance(&self) -> &Instance {
        self.instance
    }

    pub fn bounds(&self) -> &PiBounds {
        &self.bounds
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn capacity(&self) -> f64 {
        self.instance.capacity()
    }

    pub fn n(&self) -> usize {
        self.instance.n()
    }

    fn solution(&self, selection: Vec<bool>, attaining_l: Option<usize>) -> RobustSolution {
        let objective = self
            .instance
            .profits()
            .zip(&selection)
            .filter(|(_, &x)| x)
            .map(|(p, _)| p)
            .sum();
        let robust_lhs = robust_lhs(&self.bounds, &selection, self.gamma);
        let h = polymatroid::h_value(self.instance, &selection);
        RobustSolution {
            objective,
            robust_lhs,
            h,
            ckp_feasible: within_capacity(h, self.capacity()),
            attaining_l,
            selection,
        }
    }
}

fn check_gamma(gamma: f64, n: usize) -> Result<()> {
    if !(gamma >= 0.0 && gamma <= n as f64) {
        return Err(Error::validation(format!(
            "gamma must lie in [0, {n}], got {gamma}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustSolution {
    pub selection: Vec<bool>,
    pub objective: u64,
    /// Worst-case load over the budgeted uncertainty set.
    pub robust_lhs: f64,
    /// Chance-constraint left-hand side of the selection.
    pub h: f64,
    pub ckp_feasible: bool,
    /// 1-based index of the nominal subproblem that attains the optimum;
    /// `None` when the solution did not come from the decomposition.
    pub attaining_l: Option<usize>,
}

/// Worst-case load of a fixed selection: lower bounds plus the `floor(gamma)`
/// largest selected deviations and the fractional part of the next one.
pub fn robust_lhs(bounds: &PiBounds, selection: &[bool], gamma: f64) -> f64 {
    assert_eq!(selection.len(), bounds.len(), "selection length");
    let mut load = CompensatedSum::default();
    let mut devs = Vec::new();
    for (j, _) in selection.iter().enumerate().filter(|(_, &x)| x) {
        load.add(bounds.lower()[j]);
        devs.push(bounds.deviations()[j]);
    }
    if gamma > 0.0 && !devs.is_empty() {
        devs.sort_by(|a, b| b.total_cmp(a));
        let full = gamma.floor();
        let whole = (full as usize).min(devs.len());
        for &d in &devs[..whole] {
            load.add(d);
        }
        if whole < devs.len() {
            load.add((gamma - full) * devs[whole]);
        }
    }
    load.value()
}

/// Item indices by non-increasing deviation, ties by index.
fn deviation_order(bounds: &PiBounds) -> Vec<usize> {
    let dev = bounds.deviations();
    let mut order: Vec<usize> = (0..dev.len()).collect();
    order.sort_by(|&a, &b| dev[b].total_cmp(&dev[a]).then(a.cmp(&b)));
    order
}

/// Solves the robust knapsack exactly through its `n + 1` nominal
/// subproblems, each integerized with [`knapsack::scale_weights`] at
/// [`DEFAULT_SCALE`]. Subproblems whose capacity `b - gamma d_l` is negative
/// are skipped. Adds at most `n + 1` to `stats.knapsack_count`.
pub fn solve_rkp(problem: &RobustProblem<'_>, stats: &mut SolveStats) -> Result<RobustSolution> {
    let n = problem.n();
    let bounds = problem.bounds();
    let order = deviation_order(bounds);
    let mut rank = vec![0usize; n];
    for (r, &j) in order.iter().enumerate() {
        rank[j] = r;
    }
    let dev = bounds.deviations();
    let profits: Vec<u64> = problem.instance().profits().collect();

    // Subproblem for 0-based rank l; l == n is the zero-deviation sentinel.
    let subproblem = |l: usize| -> Result<Option<NominalKnapsack>> {
        let d_l = if l < n { dev[order[l]] } else { 0.0 };
        let cap = problem.capacity() - problem.gamma() * d_l;
        if cap < 0.0 {
            return Ok(None);
        }
        let weights: Vec<f64> = (0..n)
            .map(|j| {
                let extra = if rank[j] <= l { dev[j] - d_l } else { 0.0 };
                bounds.lower()[j] + extra
            })
            .collect();
        let scaled = knapsack::scale_weights(&weights, cap, DEFAULT_SCALE)?;
        NominalKnapsack::new(profits.clone(), scaled.weights, scaled.capacity).map(Some)
    };

    let mut best: Option<(u64, usize)> = None;
    for l in 0..=n {
        let Some(sub) = subproblem(l)? else { continue };
        let value = knapsack::optimum_value(&sub, stats)?;
        if best.is_none_or(|(v, _)| value > v) {
            best = Some((value, l));
        }
    }

    let Some((value, l)) = best else {
        // Every budgeted capacity is negative, so b < 0.
        if problem.capacity() >= 0.0 {
            return Ok(problem.solution(vec![false; n], None));
        }
        return Err(Error::Infeasible(format!(
            "no robust subproblem has non-negative capacity (b = {})",
            problem.capacity()
        )));
    };

    // Selection for the winning subproblem; not a new problem, so not counted.
    let sub = subproblem(l)?.expect("winning subproblem exists");
    let sol = knapsack::solve_01(&sub, &mut SolveStats::default())?;
    debug_assert_eq!(sol.objective, value);
    let out = problem.solution(sol.selection, Some(l + 1));
    if !within_capacity(out.robust_lhs, problem.capacity()) {
        return Err(Error::Infeasible(format!(
            "robust load {} exceeds capacity {} after scaling",
            out.robust_lhs,
            problem.capacity()
        )));
    }
    Ok(out)
}

/// Enumerates all `2^n` selections, keeping the most profitable one whose
/// [`robust_lhs`] does not exceed the capacity. Ties go to the
/// lexicographically smallest selection.
pub fn brute_force_rkp(problem: &RobustProblem<'_>) -> Result<RobustSolution> {
    let n = problem.n();
    if n > MAX_BRUTE_FORCE_N {
        return Err(Error::SizeGuard {
            what: "robust brute force",
            n,
            limit: MAX_BRUTE_FORCE_N,
        });
    }
    let profits: Vec<u64> = problem.instance().profits().collect();
    let mut best: Option<(u64, Vec<bool>)> = None;
    let mut selection = vec![false; n];
    // Item 0 is the most significant bit, so masks ascend lexicographically.
    for mask in 0u64..(1u64 << n) {
        for (j, x) in selection.iter_mut().enumerate() {
            *x = mask >> (n - 1 - j) & 1 == 1;
        }
        let value: u64 = (0..n).filter(|&j| selection[j]).map(|j| profits[j]).sum();
        if best.as_ref().is_some_and(|(v, _)| value <= *v) {
            continue;
        }
        if robust_lhs(problem.bounds(), &selection, problem.gamma()) <= problem.capacity() {
            best = Some((value, selection.clone()));
        }
    }
    let (_, selection) = best.expect("empty selection is always robust feasible");
    Ok(problem.solution(selection, None))
}
