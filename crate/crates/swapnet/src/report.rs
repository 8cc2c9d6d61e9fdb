//! Text renderings of results: CSV (header row, LF endings, indices
//! descending, 12 significant digits) and JSON.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::network::{AnalysisRequest, AnalysisResult, IndexRow};
use swapnet_core::OutcomeDistribution;

/// `x` with 12 significant digits, `%g` style: trailing zeros trimmed,
/// scientific notation only for very small or very large magnitudes.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_owned()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

pub fn rows_csv(rows: &[IndexRow]) -> String {
    let mut out = String::from("m,probability,concurrence,entropy\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.m, sig12(r.probability), sig12(r.concurrence), sig12(r.entropy));
    }
    out
}

fn distribution_json(d: &OutcomeDistribution) -> Value {
    Value::Array(d.iter_desc().map(|(m, p)| json!({ "m": m, "probability": p })).collect())
}

pub fn analysis_json(req: &AnalysisRequest, result: &AnalysisResult) -> String {
    let mut doc = json!({
        "request": req.to_json(),
        "parties": result.parties,
        "distribution": result.rows,
        "success_probability": result.success_probability,
        "expected_concurrence": result.expected_concurrence,
    });
    if let Some(o) = &result.oracle {
        doc["oracle_distribution"] = distribution_json(o);
    }
    if let Some(d) = result.discrepancy {
        doc["max_abs_discrepancy"] = json!(d);
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

/// `m, analytic, oracle, |diff|` over the union of both supports.
pub fn comparison_rows(analytic: &OutcomeDistribution, oracle: &OutcomeDistribution) -> Vec<(u32, f64, f64)> {
    let mut ms: Vec<u32> = analytic.indices();
    ms.extend(oracle.indices());
    ms.sort_unstable_by(|a, b| b.cmp(a));
    ms.dedup();
    ms.into_iter().map(|m| (m, analytic.weight(m), oracle.weight(m))).collect()
}

pub fn comparison_text(rows: &[(u32, f64, f64)], max_diff: f64, tolerance: f64) -> String {
    let mut out = format!("{:>4}  {:>20}  {:>20}  {:>12}\n", "m", "analytic", "oracle", "|diff|");
    for &(m, a, o) in rows {
        let _ = writeln!(out, "{m:>4}  {:>20}  {:>20}  {:>12}", sig12(a), sig12(o), sig12((a - o).abs()));
    }
    let verdict = if max_diff <= tolerance { "agree" } else { "DISAGREE" };
    let _ = writeln!(out, "max |diff| = {} (tolerance {}): {verdict}", sig12(max_diff), sig12(tolerance));
    out
}

pub fn comparison_json(rows: &[(u32, f64, f64)], max_diff: f64, tolerance: f64) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|&(m, a, o)| json!({ "m": m, "analytic": a, "oracle": o, "abs_diff": (a - o).abs() }))
        .collect();
    let doc = json!({ "rows": rows, "max_abs_discrepancy": max_diff, "tolerance": tolerance, "agree": max_diff <= tolerance });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}
