//! Browser bindings: render a triangle, certify a small leading block, and
//! convert between set partitions and path words.
//!
//! The `*_json` functions hold the logic and are plain Rust so they can be
//! tested natively; the exported wrappers only convert errors for JS.

use serde_json::json;
use tptri::bijection::{partition_of_word, total_order, validate_word, word_of_partition, PathWord};
use tptri::partition::SetPartition;
use tptri::tpcheck::{check_total_positivity, TpOptions};
use tptri::triangle::FamilySpec;
use tptri::{Triangle, VariableTable};
use wasm_bindgen::prelude::*;

/// Keeps symbolic determinants small enough for a single browser thread.
pub const MAX_CHECK_N: usize = 7;
pub const MAX_TRIANGLE_NMAX: usize = 12;

fn triangle(family: &str, params: &str, nmax: usize) -> Result<Triangle, String> {
    let t = VariableTable::new();
    let spec = FamilySpec::parse(&t, family, params).map_err(|e| e.to_string())?;
    Ok(spec.generate(&t, nmax))
}

/// Rows of entries as display strings.
pub fn triangle_json(family: &str, params: &str, nmax: usize) -> Result<String, String> {
    if nmax > MAX_TRIANGLE_NMAX {
        return Err(format!("nmax is limited to {MAX_TRIANGLE_NMAX} here"));
    }
    let tri = triangle(family, params, nmax)?;
    let rows: Vec<Vec<String>> = tri
        .rows()
        .iter()
        .map(|r| r.iter().map(|p| p.to_string()).collect())
        .collect();
    Ok(json!({ "family": tri.family(), "rows": rows }).to_string())
}

/// The deterministic report body of a full check of the leading `n x n` block.
pub fn check_json(family: &str, params: &str, n: usize) -> Result<String, String> {
    if n == 0 || n > MAX_CHECK_N {
        return Err(format!("n must lie in 1..={MAX_CHECK_N} here"));
    }
    let tri = triangle(family, params, n - 1)?;
    let report = check_total_positivity(&tri, n, &TpOptions::default()).map_err(|e| e.to_string())?;
    Ok(report.body_json())
}

pub fn partition_json(partition: &str) -> Result<String, String> {
    let pi: SetPartition = partition.parse().map_err(|e: tptri::Error| e.to_string())?;
    if pi.n() == 0 || pi.n() > 20 {
        return Err("use a partition of [m] with 1 <= m <= 20".into());
    }
    let (w, n, k) = word_of_partition(&pi);
    Ok(json!({
        "partition": pi.to_string(),
        "order": total_order(&pi),
        "word": w.to_string(),
        "n": n,
        "k": k,
    })
    .to_string())
}

pub fn word_json(word: &str, n: usize, k: usize) -> Result<String, String> {
    let w: PathWord = word.parse().map_err(|e: tptri::Error| e.to_string())?;
    if let Err(v) = validate_word(&w, n, k) {
        return Err(v.to_string());
    }
    let pi = partition_of_word(&w, n, k).map_err(|e| e.to_string())?;
    Ok(json!({ "partition": pi.to_string(), "order": total_order(&pi), "word": w.to_string() }).to_string())
}

#[wasm_bindgen]
pub fn render_triangle(family: &str, params: &str, nmax: usize) -> Result<String, JsError> {
    triangle_json(family, params, nmax).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn check_tp(family: &str, params: &str, n: usize) -> Result<String, JsError> {
    check_json(family, params, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn partition_to_word(partition: &str) -> Result<String, JsError> {
    partition_json(partition).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn word_to_partition(word: &str, n: usize, k: usize) -> Result<String, JsError> {
    word_json(word, n, k).map_err(|e| JsError::new(&e))
}
