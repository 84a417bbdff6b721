#![allow(dead_code)]

use ckp_core::{generate, GeneratorConfig, Instance, InstanceKind, Item};

/// rho with z = 1.
pub const RHO_Z1: f64 = 0.841_344_746_068_542_9;

/// Three items, z = 1, b = 12.
pub fn ex_a() -> Instance {
    Instance::new(
        "ex-a",
        InstanceKind::Custom,
        vec![
            Item::new(10, 4.0, 3.0),
            Item::new(7, 3.0, 4.0),
            Item::new(5, 2.0, 12.0),
        ],
        12.0,
        RHO_Z1,
        None,
    )
    .unwrap()
}

pub const KINDS: [InstanceKind; 3] = [InstanceKind::Sc, InstanceKind::Ic, InstanceKind::Ss];
pub const RHOS: [f64; 3] = [0.85, 0.90, 0.95];

/// Seeded benchmark instance with kind and rho rotating with the seed.
pub fn seeded(seed: u64, n: usize) -> Instance {
    let kind = KINDS[(seed % 3) as usize];
    let rho = RHOS[((seed / 3) % 3) as usize];
    generate(&GeneratorConfig::new(kind, n, rho, seed)).unwrap()
}

/// `erf(t)` for `t >= 0` from the all-positive series
/// `2/sqrt(pi) exp(-t^2) sum_k 2^k t^(2k+1) / (1 3 5 ... (2k+1))`.
pub fn erf_series(t: f64) -> f64 {
    assert!(t >= 0.0);
    let mut term = t;
    let mut sum = t;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= 2.0 * t * t / (2.0 * k + 1.0);
        sum += term;
        if term <= sum * 1e-18 {
            break;
        }
    }
    2.0 / std::f64::consts::PI.sqrt() * (-t * t).exp() * sum
}

pub fn cdf_series(x: f64) -> f64 {
    let e = erf_series(x.abs() / std::f64::consts::SQRT_2);
    if x >= 0.0 {
        0.5 + 0.5 * e
    } else {
        0.5 - 0.5 * e
    }
}

/// Quantile by bisection on [`cdf_series`].
pub fn quantile_bisection(p: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf_series(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// All selections of `n` items.
pub fn selections(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..1 << n).map(move |m| (0..n).map(|j| m >> j & 1 == 1).collect())
}
