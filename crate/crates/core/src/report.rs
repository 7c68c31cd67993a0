//! CSV and JSON emission with stable number formatting.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::entangling::{Figure2Row, FIGURE2_HEADER};
use crate::error::Result;
use crate::solver::{Figure3Row, FIGURE3_HEADER};

/// Twelve significant digits; scientific notation outside `[1e-4, 1e12)`.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..12).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let text = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit, e.g. 9.99.. -> 10.0..
    if text.trim_start_matches('-').replace('.', "").trim_start_matches('0').len() > 12 && decimals > 0 {
        let decimals = decimals - 1;
        return format!("{x:.decimals$}");
    }
    text
}

fn opt(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_else(|| "nan".into())
}

pub fn figure2_csv(rows: &[Figure2Row]) -> String {
    let mut out = String::from(FIGURE2_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.d,
            sig12(r.log2d),
            sig12(r.lambda_opt),
            sig12(r.gamma_d),
            sig12(r.entropy_bits)
        );
    }
    out
}

pub fn figure3_csv(rows: &[Figure3Row]) -> String {
    let mut out = String::from(FIGURE3_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.d,
            sig12(r.p),
            opt(r.f_max),
            sig12(r.entropy_bits),
            opt(r.precision)
        );
    }
    out
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
