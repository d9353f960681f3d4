//! Fixed numeric formatting for reproducible output files.
//!
//! Every real written by this crate is first rounded to nine significant
//! digits, then printed in shortest round-trip form.

use serde::Serializer;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Rounds `x` to nine significant digits. Non-finite values pass through.
pub fn round_sig9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Text form of [`round_sig9`], e.g. `0.22`, `-0.896`, `1e-13`.
pub fn fmt_sig9(x: f64) -> String {
    let r = round_sig9(x);
    if r == 0.0 {
        // drop the sign of negative zero
        return "0".to_string();
    }
    if r.is_finite() && r.fract() == 0.0 && r.abs() < 1e15 {
        return format!("{}", r as i64);
    }
    serde_json::Number::from_f64(r)
        .map(|n| n.to_string())
        .unwrap_or_else(|| r.to_string())
}

pub fn sig9<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig9(*x))
}

pub fn sig9_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| round_sig9(*x)))
}
