//! Acceptance suite. Each test prints one PASS/FAIL line; run with
//! `cargo test -p ckp-core --test acceptance -- --nocapture --test-threads 1`.

mod common;

use std::time::Instant;

use ckp_core::heuristic::gamma_grid;
use ckp_core::polymatroid::{self, check_all_extreme_points};
use ckp_core::{
    brute_force_rkp, exact_ckp, generate, h_value, inv_norm_cdf, is_ckp_feasible, jump_search,
    pi_bounds, robust_lhs, run_bench, solve_rkp, sweep, BenchSpec, GeneratorConfig,
    InstanceKind, JumpSearchConfig, RobustProblem, SolveStats,
};
use common::*;

fn verdict(id: u32, title: &str, ok: bool, detail: String) {
    println!(
        "[{}] criterion {id}: {title} -- {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

#[test]
fn criterion_1_decomposition_matches_brute_force() {
    let start = Instant::now();
    let mut instances = 0;
    let mut checks = 0;
    let mut mismatches = Vec::new();
    for seed in 0..216u64 {
        let n = 4 + (seed % 9) as usize;
        let inst = seeded(seed, n);
        assert!((4..=12).contains(&inst.n()));
        let bounds = pi_bounds(&inst);
        let half = (n / 2) as f64;
        for gamma in [0.0, 0.5, 1.0, 2.5, half, n as f64] {
            let p = RobustProblem::with_bounds(&inst, &bounds, gamma).unwrap();
            let fast = solve_rkp(&p, &mut SolveStats::default()).unwrap();
            let slow = brute_force_rkp(&p).unwrap();
            checks += 1;
            if fast.objective != slow.objective {
                mismatches.push((seed, gamma, fast.objective, slow.objective));
            }
        }
        instances += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        1,
        "max-over-l decomposition equals brute force",
        mismatches.is_empty() && instances >= 200 && secs < 60.0,
        format!("{instances} instances, {checks} budgets, mismatches {mismatches:?}, {secs:.1}s"),
    );
}

#[test]
fn criterion_2_extreme_point_equivalence() {
    let start = Instant::now();
    let mut disagreements = 0;
    let mut selections_checked = 0;
    let (mut feasible, mut infeasible) = (0, 0);
    for seed in 0..60u64 {
        let n = 1 + (seed % 7) as usize;
        let ratio = [0.3, 0.5, 0.8][(seed % 3) as usize];
        let kind = KINDS[((seed / 7) % 3) as usize];
        let rho = RHOS[((seed / 3) % 3) as usize];
        let inst = generate(&GeneratorConfig::new(kind, n, rho, 1000 + seed).with_capacity_ratio(ratio))
            .unwrap();
        for x in selections(n) {
            let direct = is_ckp_feasible(&inst, &x);
            let via_points = check_all_extreme_points(&inst, &x).unwrap();
            selections_checked += 1;
            if direct {
                feasible += 1;
            } else {
                infeasible += 1;
            }
            if direct != via_points {
                disagreements += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        2,
        "h <= b iff every extreme point constraint holds",
        disagreements == 0 && feasible > 0 && infeasible > 0 && secs < 30.0,
        format!(
            "60 instances, {selections_checked} selections ({feasible} feasible), \
             {disagreements} disagreements, {secs:.1}s"
        ),
    );
}

#[test]
fn criterion_3_full_budget_is_chance_feasible() {
    let mut failures = Vec::new();
    let total = 520u64;
    for seed in 0..total {
        let n = 1 + (seed % 50) as usize;
        let inst = seeded(10_000 + seed, n);
        let p = RobustProblem::new(&inst, n as f64).unwrap();
        let sol = solve_rkp(&p, &mut SolveStats::default()).unwrap();
        if !sol.ckp_feasible {
            failures.push(seed);
        }
    }
    verdict(
        3,
        "RKP(n) optimum is CKP-feasible",
        failures.is_empty(),
        format!("{total} instances with n <= 50, infeasible: {failures:?}"),
    );
}

#[test]
fn criterion_4_heuristic_feasible_and_sandwiched() {
    let mut violations = Vec::new();
    let mut gaps = Vec::new();
    let count = 110u64;
    for seed in 0..count {
        let n = 5 + (seed % 16) as usize;
        let inst = seeded(20_000 + seed, n);
        let heur = jump_search(&inst, &JumpSearchConfig::default()).unwrap();
        let exact = exact_ckp(&inst).unwrap();
        let full = solve_rkp(
            &RobustProblem::new(&inst, n as f64).unwrap(),
            &mut SolveStats::default(),
        )
        .unwrap();
        let h = h_value(&inst, &heur.solution.selection);
        let ok = is_ckp_feasible(&inst, &heur.solution.selection)
            && heur.solution.ckp_feasible
            && (h - heur.solution.h).abs() < 1e-9
            && exact.objective >= heur.objective()
            && heur.objective() >= full.objective;
        if !ok {
            violations.push(seed);
        }
        if exact.objective > 0 {
            gaps.push(100.0 * (exact.objective - heur.objective()) as f64 / exact.objective as f64);
        }
    }
    let mean_gap = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let max_gap = gaps.iter().cloned().fold(0.0, f64::max);
    verdict(
        4,
        "jump search feasible and exact >= heuristic >= RKP(n)",
        violations.is_empty(),
        format!(
            "{count} instances with n <= 20, violations {violations:?}, \
             mean gap {mean_gap:.3}%, max gap {max_gap:.3}%"
        ),
    );
}

#[test]
fn criterion_5_objective_and_count_grow_with_k() {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut count_k3 = Vec::new();
    for seed in 1..=10u64 {
        let inst = generate(&GeneratorConfig::new(InstanceKind::Sc, 100, 0.95, seed)).unwrap();
        let runs: Vec<_> = (1..=5)
            .map(|k| jump_search(&inst, &JumpSearchConfig::with_levels(k)).unwrap())
            .collect();
        for w in runs.windows(2) {
            if w[1].objective() < w[0].objective() || w[1].knapsack_count < w[0].knapsack_count {
                problems.push(format!("seed {seed}: non-monotone"));
            }
        }
        if runs[2].knapsack_count >= 10_000 {
            problems.push(format!("seed {seed}: {} solves at K=3", runs[2].knapsack_count));
        }
        count_k3.push(runs[2].knapsack_count);
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        5,
        "objective and knapsack count non-decreasing in K (SC, n=100, rho=0.95)",
        problems.is_empty() && secs < 120.0,
        format!("K=3 counts {count_k3:?}, problems {problems:?}, {secs:.1}s"),
    );
}

#[test]
fn criterion_6_sweep_objective_non_increasing() {
    let start = Instant::now();
    let inst = generate(&GeneratorConfig::new(InstanceKind::Sc, 100, 0.95, 7)).unwrap();
    let grid = gamma_grid(10.0, 0.1).unwrap();
    let recs = sweep(&inst, &grid).unwrap();
    let monotone = recs.windows(2).all(|w| w[1].objective <= w[0].objective);
    let h_rises = recs.windows(2).filter(|w| w[1].h_star > w[0].h_star).count();
    let secs = start.elapsed().as_secs_f64();
    verdict(
        6,
        "RKP objective non-increasing over gamma = 0..10 step 0.1",
        recs.len() == 101 && monotone && secs < 300.0,
        format!(
            "{} rows, obj {} -> {}, h* increases at {h_rises} steps (not asserted), {secs:.1}s",
            recs.len(),
            recs[0].objective,
            recs[100].objective
        ),
    );
}

#[test]
fn criterion_7_quantile_matches_bisection() {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let p = 0.5 + (0.9999 - 0.5) * i as f64 / 999.0;
        let got = inv_norm_cdf(p).unwrap().value();
        worst = worst.max((got - quantile_bisection(p)).abs());
    }
    verdict(
        7,
        "normal quantile within 1e-8 of bisection oracle on [0.5, 0.9999]",
        worst <= 1e-8,
        format!("1000 points, max abs error {worst:.3e}"),
    );
}

#[test]
fn criterion_8_worked_example_regression() {
    let inst = ex_a();
    let tol = 1e-6;
    let b = pi_bounds(&inst);
    let mut errs = Vec::new();
    let mut check = |what: &str, got: f64, want: f64| {
        if (got - want).abs() > tol {
            errs.push(format!("{what}: {got} vs {want}"));
        }
    };
    for (j, want) in [7.0, 7.0, 14.0].into_iter().enumerate() {
        check("upper", b.upper()[j], want);
    }
    for (j, want) in [4.350_889_4, 3.630_683_0, 10.0].into_iter().enumerate() {
        check("lower", b.lower()[j], want);
    }
    check("f(N)", polymatroid::f_value(&inst, &[0, 1, 2]).unwrap(), 22.0);
    check(
        "robust_lhs",
        robust_lhs(&b, &[true, true, false], 1.0),
        11.350_890,
    );
    let heur = jump_search(
        &inst,
        &JumpSearchConfig {
            levels: 1,
            u: Some(3),
            v: 10,
        },
    )
    .unwrap();
    check("heuristic objective", heur.objective() as f64, 17.0);
    check("heuristic gamma", heur.gamma, 0.0);
    check("exact objective", exact_ckp(&inst).unwrap().objective as f64, 17.0);
    check("heuristic solves", heur.knapsack_count as f64, 4.0);
    verdict(
        8,
        "worked three-item example reproduced to 1e-6",
        errs.is_empty(),
        if errs.is_empty() { "all values match".into() } else { errs.join("; ") },
    );
}

#[test]
fn criterion_9_experiment_matrix_structure() {
    let spec = BenchSpec {
        sizes: vec![15],
        reps: 10,
        seed_base: 500,
        with_oracle: true,
        ..Default::default()
    };
    let rows = run_bench(&spec).unwrap();
    let mut buf = Vec::new();
    ckp_core::bench::write_bench_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let has_columns = ["obj", "time", "gamma", "knapsack"]
        .iter()
        .all(|c| header.contains(c));
    let gaps_ok = rows
        .iter()
        .all(|r| r.gap_percent.is_some_and(|g| g >= 0.0) && r.reps == 10);
    verdict(
        9,
        "experiment matrix: 9 cells per size, 10 reps, obj/time/gamma/#knapsack columns",
        rows.len() == 9 && has_columns && gaps_ok,
        format!(
            "{} rows, gaps all non-negative; per-cell values depend on seeds \
             and hardware",
            rows.len()
        ),
    );
}
