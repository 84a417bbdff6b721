//! CSV output shared by sweeps and the benchmark matrix.
//!
//! Reals use `.` as decimal separator, no grouping, and 6 significant digits;
//! times use 3 decimals.

use std::io::{self, Write};

use crate::heuristic::SweepRecord;

/// Formats `x` with `digits` significant digits, dropping trailing zeros.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let digits = digits.max(1);
    let exp = x.abs().log10().floor() as i32;
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let s = format!("{:.*e}", digits - 1, x);
        let (mantissa, exponent) = s.split_once('e').expect("exponent");
        format!("{}e{}", trim_zeros(mantissa.to_string()), exponent)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}

pub fn format_seconds(secs: f64) -> String {
    format!("{secs:.3}")
}

pub const SWEEP_HEADER: &str = "gamma,obj,h_star,feasible";

pub fn write_sweep_csv<W: Write>(mut out: W, records: &[SweepRecord]) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{}",
            format_significant(r.gamma, 6),
            r.objective,
            format_significant(r.h_star, 6),
            r.feasible
        )?;
    }
    Ok(())
}
