//! The submodular load function of the chance constraint and its polymatroid.
//!
//! For a subset `S`, `f(S) = sum_{j in S} mean_j + z * sqrt(sum_{j in S} sigma_j^2)`.
//! Marginals of `f` along a permutation form an extreme point of the
//! polymatroid `{pi : pi(S) <= f(S) for all S}`. A binary selection satisfies
//! the chance constraint exactly when it satisfies `pi . x <= b` for every
//! extreme point, and each marginal `pi_j` lies between the value item `j`
//! takes when placed last and when placed first.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::numeric::{compensated_sum, CompensatedSum};

/// Relative slack of the feasibility test `lhs <= b (1 + REL) + ABS`.
pub const FEASIBILITY_REL_TOL: f64 = 1e-9;
/// Absolute slack of the feasibility test.
pub const FEASIBILITY_ABS_TOL: f64 = 1e-12;

/// Largest instance [`check_all_extreme_points`] will enumerate.
pub const MAX_EXTREME_POINT_N: usize = 8;

/// The tolerance rule shared by every CKP feasibility decision.
pub fn within_capacity(lhs: f64, capacity: f64) -> bool {
    lhs <= capacity * (1.0 + FEASIBILITY_REL_TOL) + FEASIBILITY_ABS_TOL
}

/// `sqrt(rest + part) - sqrt(rest)` without cancellation.
fn sqrt_gap(part: f64, total: f64, rest: f64) -> f64 {
    let denom = total.max(0.0).sqrt() + rest.max(0.0).sqrt();
    if denom > 0.0 {
        part / denom
    } else {
        0.0
    }
}

pub fn f_value(inst: &Instance, subset: &[usize]) -> Result<f64> {
    let n = inst.n();
    let mut seen = vec![false; n];
    for &j in subset {
        if j >= n {
            return Err(Error::Index { index: j, n });
        }
        if std::mem::replace(&mut seen[j], true) {
            return Err(Error::validation(format!("item {j} repeated in subset")));
        }
    }
    let items = inst.items();
    let mean = compensated_sum(subset.iter().map(|&j| items[j].mean));
    let var = compensated_sum(subset.iter().map(|&j| items[j].sigma * items[j].sigma));
    Ok(mean + inst.z() * var.sqrt())
}

/// Left-hand side of the deterministic chance constraint for `selection`.
///
/// Panics if `selection.len() != inst.n()`.
pub fn h_value(inst: &Instance, selection: &[bool]) -> f64 {
    assert_eq!(selection.len(), inst.n(), "selection length");
    let mut mean = CompensatedSum::default();
    let mut var = CompensatedSum::default();
    for (it, _) in inst.items().iter().zip(selection).filter(|(_, &x)| x) {
        mean.add(it.mean);
        var.add(it.sigma * it.sigma);
    }
    mean.value() + inst.z() * var.value().sqrt()
}

/// Whether `selection` meets the chance constraint under [`within_capacity`].
pub fn is_ckp_feasible(inst: &Instance, selection: &[bool]) -> bool {
    within_capacity(h_value(inst, selection), inst.capacity())
}

/// Per-item weight intervals spanned by the polymatroid's extreme points.
#[derive(Debug, Clone, PartialEq)]
pub struct PiBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
    deviations: Vec<f64>,
}

impl PiBounds {
    /// Builds bounds from explicit values; `lower <= upper` is required.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::validation("bounds need matching, non-empty lengths"));
        }
        for (j, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo <= hi) {
                return Err(Error::validation(format!(
                    "item {j}: need 0 <= lower <= upper, got [{lo}, {hi}]"
                )));
            }
        }
        let deviations = lower.iter().zip(&upper).map(|(lo, hi)| hi - lo).collect();
        Ok(PiBounds {
            lower,
            upper,
            deviations,
        })
    }

    /// Marginal of each item when it comes last in the permutation.
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// Marginal of each item when it comes first in the permutation.
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// `upper - lower`.
    pub fn deviations(&self) -> &[f64] {
        &self.deviations
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }
}

pub fn pi_bounds(inst: &Instance) -> PiBounds {
    let items = inst.items();
    let z = inst.z();
    let n = items.len();
    let sq: Vec<f64> = items.iter().map(|it| it.sigma * it.sigma).collect();

    // Variance of N \ {j} from compensated prefix and suffix sums.
    let mut prefix = vec![CompensatedSum::default(); n + 1];
    for j in 0..n {
        prefix[j + 1] = prefix[j];
        prefix[j + 1].add(sq[j]);
    }
    let mut suffix = vec![CompensatedSum::default(); n + 1];
    for j in (0..n).rev() {
        suffix[j] = suffix[j + 1];
        suffix[j].add(sq[j]);
    }
    let total = prefix[n].value();

    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for j in 0..n {
        let rest = prefix[j].value() + suffix[j + 1].value();
        lower.push(items[j].mean + z * sqrt_gap(sq[j], total, rest));
        upper.push(items[j].mean + z * items[j].sigma);
    }
    let deviations = lower.iter().zip(&upper).map(|(lo, hi)| hi - lo).collect();
    PiBounds {
        lower,
        upper,
        deviations,
    }
}

/// An extreme point of the polymatroid, indexed by item.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremePoint {
    pub values: Vec<f64>,
    pub permutation: Vec<usize>,
}

/// Edmonds' greedy point: each item receives its marginal `f` value given the
/// items ahead of it in `permutation`.
pub fn greedy_extreme_point(inst: &Instance, permutation: &[usize]) -> Result<ExtremePoint> {
    let n = inst.n();
    if permutation.len() != n {
        return Err(Error::validation(format!(
            "permutation has {} entries for {n} items",
            permutation.len()
        )));
    }
    let mut seen = vec![false; n];
    for &j in permutation {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return Err(Error::validation(format!(
                "{permutation:?} is not a permutation of 0..{n}"
            )));
        }
    }
    Ok(extreme_point_unchecked(inst, permutation))
}

fn extreme_point_unchecked(inst: &Instance, permutation: &[usize]) -> ExtremePoint {
    let items = inst.items();
    let z = inst.z();
    let mut values = vec![0.0; items.len()];
    let mut var = CompensatedSum::default();
    for &j in permutation {
        let before = var.value();
        let sq = items[j].sigma * items[j].sigma;
        var.add(sq);
        values[j] = items[j].mean + z * sqrt_gap(sq, var.value(), before);
    }
    ExtremePoint {
        values,
        permutation: permutation.to_vec(),
    }
}

/// Checks `pi . x <= b` against all `n!` greedy extreme points.
pub fn check_all_extreme_points(inst: &Instance, selection: &[bool]) -> Result<bool> {
    let n = inst.n();
    if n > MAX_EXTREME_POINT_N {
        return Err(Error::SizeGuard {
            what: "extreme point enumeration",
            n,
            limit: MAX_EXTREME_POINT_N,
        });
    }
    if selection.len() != n {
        return Err(Error::validation("selection length differs from n"));
    }
    for perm in (0..n).permutations(n) {
        let point = extreme_point_unchecked(inst, &perm);
        let lhs = compensated_sum(
            point
                .values
                .iter()
                .zip(selection)
                .filter(|(_, &x)| x)
                .map(|(v, _)| *v),
        );
        if !within_capacity(lhs, inst.capacity()) {
            return Ok(false);
        }
    }
    Ok(true)
}
