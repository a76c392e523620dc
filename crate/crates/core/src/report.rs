//! Text encodings shared by the CLI and the tests.
//!
//! CSV output is UTF-8 with LF line endings, a mandatory header and empty
//! fields for absent values. Reals are written with 9 significant digits.

use crate::mc::SweepRow;
use std::fmt::Write;

pub const SWEEP_HEADER: [&str; 11] = [
    "n",
    "epsilon",
    "estimate",
    "std_err",
    "ci_lo",
    "ci_hi",
    "bound_poly",
    "bound_integral",
    "bound_per_b",
    "exact_n2",
    "trials",
];

pub const GROWTH_HEADER: [&str; 2] = ["n", "growth_bound"];

/// Formats `x` rounded to 9 significant digits, in plain notation for
/// magnitudes in `[1e-5, 1e15)` and scientific notation otherwise.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    let mag = rounded.abs();
    if (1e-5..1e15).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

pub fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = SWEEP_HEADER.join(",");
    out.push('\n');
    for r in rows {
        let fields = [
            r.n.to_string(),
            fmt_real(r.epsilon),
            fmt_opt(r.estimate),
            fmt_opt(r.std_err),
            fmt_opt(r.ci_lo),
            fmt_opt(r.ci_hi),
            fmt_real(r.bound_poly),
            fmt_real(r.bound_integral),
            fmt_real(r.bound_per_b),
            fmt_opt(r.exact_n2),
            r.trials.map(|t| t.to_string()).unwrap_or_default(),
        ];
        out.push_str(&csv_line(&fields));
    }
    out
}

pub fn growth_csv(values: &[(usize, f64)]) -> String {
    let mut out = GROWTH_HEADER.join(",");
    out.push('\n');
    for (n, g) in values {
        writeln!(out, "{n},{}", fmt_real(*g)).expect("writing to a String");
    }
    out
}
