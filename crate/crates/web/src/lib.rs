//! Browser bindings: the page passes strings in and gets JSON strings back.
//!
//! The plain functions are what the native tests exercise; the
//! `wasm_bindgen` exports only convert errors into JS exceptions.

use runlaw::dna::{estimate_probs, frequent_pattern_report, read_fasta, AlphabetMap, LiteralMode};
use runlaw::exactdist::pmf;
use runlaw::pattern::{parse_bounds, RunPattern};
use runlaw::polyalg::{exact_string, parse_rational_list, Rational};
use runlaw::waiting::psi;
use runlaw::Result;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Rational arithmetic grows quickly; keep page requests small.
pub const MAX_N: usize = 400;

fn pattern(bounds: &str, probs: &str) -> Result<RunPattern> {
    RunPattern::new(parse_bounds(bounds)?, parse_rational_list(probs)?)
}

fn check_n(n: usize) -> Result<()> {
    if n > MAX_N {
        return Err(runlaw::Error::Cli(format!("length {n} exceeds the demo limit of {MAX_N}")));
    }
    Ok(())
}

fn exact_list(values: &[Rational]) -> Vec<String> {
    values.iter().map(exact_string).collect()
}

/// Exact pmf of the occurrence count at length `n`.
pub fn distribution_json(bounds: &str, probs: &str, n: usize, digits: usize) -> Result<String> {
    check_n(n)?;
    let pat = pattern(bounds, probs)?;
    let table = pmf(&pat, n);
    let mean = table.moment(1);
    Ok(json!({
        "pattern": pat.to_string(),
        "probs": exact_list(pat.probs()),
        "n": n,
        "mean": exact_string(&mean),
        "rows": table.rows(digits),
    })
    .to_string())
}

/// Waiting time for the `r`-th occurrence, tabulated up to `horizon`.
pub fn waiting_json(bounds: &str, probs: &str, r: u32, horizon: usize, digits: usize) -> Result<String> {
    check_n(horizon)?;
    let pat = pattern(bounds, probs)?;
    let w = psi(&pat, r)?;
    Ok(json!({
        "pattern": pat.to_string(),
        "pgf": w.pgf().to_string(),
        "table": w.table(horizon, digits),
    })
    .to_string())
}

/// Frequent-pattern report for a DNA literal, with letter frequencies
/// estimated from pasted FASTA text.
pub fn dna_json(fasta: &str, literal: &str, mode: &str, n: usize, min_support: usize, digits: usize) -> Result<String> {
    check_n(n)?;
    let alphabet = AlphabetMap::default();
    let records = read_fasta(fasta.as_bytes(), &alphabet, false)?;
    let seqs: Vec<&str> = records.iter().map(|r| r.sequence.as_str()).collect();
    let probs = estimate_probs(&seqs, &alphabet)?;
    let mode: LiteralMode = mode.parse()?;
    let report = frequent_pattern_report(probs, literal, mode, &alphabet, n, min_support)?;
    Ok(json!({
        "records": records.len(),
        "probs": exact_list(report.pattern.probs()),
        "report": report.view(digits),
    })
    .to_string())
}

fn js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn distribution(bounds: &str, probs: &str, n: usize, digits: usize) -> std::result::Result<String, JsError> {
    js(distribution_json(bounds, probs, n, digits))
}

#[wasm_bindgen]
pub fn waiting(
    bounds: &str,
    probs: &str,
    r: u32,
    horizon: usize,
    digits: usize,
) -> std::result::Result<String, JsError> {
    js(waiting_json(bounds, probs, r, horizon, digits))
}

#[wasm_bindgen]
pub fn dna(
    fasta: &str,
    literal: &str,
    mode: &str,
    n: usize,
    min_support: usize,
    digits: usize,
) -> std::result::Result<String, JsError> {
    js(dna_json(fasta, literal, mode, n, min_support, digits))
}
