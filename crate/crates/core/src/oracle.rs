//! Exact CKP by enumerating every selection.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::polymatroid::{h_value, within_capacity};

/// Largest instance [`exact_ckp`] will enumerate.
pub const MAX_EXACT_N: usize = 22;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult {
    pub objective: u64,
    pub selection: Vec<bool>,
    pub h: f64,
}

/// Walks all `2^n` selections in Gray-code order, updating the mean load and
/// variance incrementally. Selections whose incremental load lands near the
/// capacity are re-evaluated from scratch before they are accepted or
/// rejected. Ties go to the lexicographically smallest selection.
pub fn exact_ckp(inst: &Instance) -> Result<ExactResult> {
    let n = inst.n();
    if n > MAX_EXACT_N {
        return Err(Error::SizeGuard {
            what: "exact CKP enumeration",
            n,
            limit: MAX_EXACT_N,
        });
    }
    let items = inst.items();
    let z = inst.z();
    let b = inst.capacity();
    let margin = 1e-7 * (1.0 + b.abs());

    let mut selection = vec![false; n];
    let mut mean = 0.0f64;
    let mut var = 0.0f64;
    let mut profit = 0u64;
    // Item 0 is the most significant bit of the lexicographic key.
    let mut key = 0u64;

    let mut best_profit = 0u64;
    let mut best_key = 0u64;

    for step in 1u64..(1u64 << n) {
        let j = step.trailing_zeros() as usize;
        let it = &items[j];
        if selection[j] {
            selection[j] = false;
            mean -= it.mean;
            var -= it.sigma * it.sigma;
            profit -= it.profit;
        } else {
            selection[j] = true;
            mean += it.mean;
            var += it.sigma * it.sigma;
            profit += it.profit;
        }
        key ^= 1 << (n - 1 - j);

        if profit < best_profit || (profit == best_profit && key > best_key) {
            continue;
        }
        let h = mean + z * var.max(0.0).sqrt();
        let feasible = if (h - b).abs() <= margin {
            within_capacity(h_value(inst, &selection), b)
        } else {
            h < b
        };
        if feasible {
            best_profit = profit;
            best_key = key;
        }
    }

    let selection: Vec<bool> = (0..n).map(|j| best_key >> (n - 1 - j) & 1 == 1).collect();
    let h = h_value(inst, &selection);
    Ok(ExactResult {
        objective: best_profit,
        selection,
        h,
    })
}
