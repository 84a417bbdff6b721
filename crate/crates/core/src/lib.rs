//! Solver library for the chance-constrained binary knapsack problem (CKP)
//! with independent normally distributed item weights.
//!
//! The chance constraint `P(sum a_j x_j <= b) >= rho` is equivalent to
//! `sum mean_j x_j + z_rho * sqrt(sum sigma_j^2 x_j) <= b`. The left-hand side
//! is a submodular set function whose polymatroid extreme points give each item
//! an interval of possible weights. Budgeted robust knapsacks over those
//! intervals are solved exactly through ordinary 0/1 knapsacks, and a jump
//! search over the uncertainty budget returns a CKP-feasible selection.
//!
//! Module map:
//!
//! - [`instance`]: data model, seeded SC/IC/SS generators and JSON files.
//! - [`gauss`]: standard normal quantile.
//! - [`knapsack`]: exact 0/1 knapsack by profit DP and the integer scaling rule.
//! - [`polymatroid`]: the submodular function, its greedy extreme points and
//!   CKP feasibility.
//! - [`robust`]: the budgeted robust knapsack and its brute-force oracle.
//! - [`heuristic`]: jump search over the budget and budget sweeps.
//! - [`oracle`]: exact CKP by subset enumeration.
//! - [`bench`] and [`report`]: experiment matrix and CSV output.
//!
//! Item indices are 0-based throughout.

pub mod bench;
pub mod error;
pub mod gauss;
pub mod heuristic;
pub mod instance;
pub mod knapsack;
pub mod oracle;
pub mod polymatroid;
pub mod report;
pub mod robust;

mod numeric;
mod rng;

pub use bench::{run_bench, BenchRow, BenchSpec};
pub use error::{Error, Result};
pub use gauss::{inv_norm_cdf, norm_cdf, Quantile};
pub use heuristic::{jump_search, sweep, JumpSearchConfig, JumpSearchResult, Probe, SweepRecord};
pub use instance::{generate, GeneratorConfig, Instance, InstanceKind, Item};
pub use knapsack::{scale_weights, solve_01, KnapsackSolution, NominalKnapsack, SolveStats};
pub use oracle::{exact_ckp, ExactResult};
pub use polymatroid::{f_value, h_value, is_ckp_feasible, pi_bounds, PiBounds};
pub use robust::{brute_force_rkp, robust_lhs, solve_rkp, RobustProblem, RobustSolution};
