//! Browser bindings for the demo page. Each export returns a JSON string;
//! the `*_json` functions hold the logic so they can run natively too.

use heffter::embed::{find_compatible_ordering, rotation_system, trace_embedding, OrderingSearch};
use heffter::gha_cyclic::{build_nonzero_simple_ngha, GhaCandidate};
use heffter::gmatrix::{partial_sums, GMatrix, Line};
use heffter::group::SymbolSet;
use heffter::nasm::build_uniform_nasm;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn parse_symbols(s: &str) -> Result<Vec<usize>, String> {
    s.split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| t.trim().parse().map_err(|_| format!("bad symbol `{t}`")))
        .collect()
}

pub fn nasm_json(m: usize, n: usize, h: usize, k: usize) -> Result<String, String> {
    let a = build_uniform_nasm(m, n, h, k).map_err(|e| e.to_string())?;
    let c = a.verify();
    Ok(json!({ "rows": a.to_rows(), "is_nasm": c.is_nasm, "weights": c.weights }).to_string())
}

/// Nonzero sum array over `Z_v` from the uniform NASM, with the partial sums
/// of every row and column.
pub fn nonzero_gha_json(v: usize, symbols: &str, m: usize, n: usize) -> Result<String, String> {
    let s = parse_symbols(symbols)?;
    if m == 0 || n == 0 || s.len() % m != 0 || s.len() % n != 0 {
        return Err(format!("{} symbols do not fill {m} rows and {n} columns evenly", s.len()));
    }
    let nasm = build_uniform_nasm(m, n, s.len() / m, s.len() / n).map_err(|e| e.to_string())?;
    let c = build_nonzero_simple_ngha(v, &s, &nasm).map_err(|e| e.to_string())?;
    let r = c.verify();
    let omega = c.effective_ordering();
    let g = c.matrix.group();
    let runs = |line| partial_sums(g, &omega.sequence(&c.matrix, line));
    let row_runs: Vec<_> = (0..m).map(|i| runs(Line::Row(i))).collect();
    let col_runs: Vec<_> = (0..n).map(|j| runs(Line::Col(j))).collect();
    Ok(json!({
        "rows": c.matrix.to_rows(),
        "row_partial_sums": row_runs,
        "col_partial_sums": col_runs,
        "verdict": r.verdict(),
        "simple": r.is_simple(),
        "checks": r.checks,
    })
    .to_string())
}

/// Faces and genus of the biembedding of a matrix given in text form, after
/// searching at most `budget` orderings for a compatible one.
pub fn embed_json(text: &str, budget: usize) -> Result<String, String> {
    let a = GMatrix::from_text(text).map_err(|e| e.to_string())?;
    let g = a.group().clone();
    let mut s: Vec<usize> = a.nonzero_entries().into_iter().map(|x| g.abs(x)).collect();
    s.sort_unstable();
    s.dedup();
    let symbols = SymbolSet::new(g, s, 1).map_err(|e| e.to_string())?;
    let c = GhaCandidate::new(a, symbols, None);
    let search = find_compatible_ordering(&c.matrix, budget).map_err(|e| e.to_string())?;
    let OrderingSearch::Found { ordering, tried } = search else {
        return Ok(json!({ "found": false, "search": search }).to_string());
    };
    let rs = rotation_system(&c, &ordering).map_err(|e| e.to_string())?;
    let e = trace_embedding(&rs).map_err(|e| e.to_string())?;
    Ok(json!({
        "found": true,
        "tried": tried,
        "valid": e.is_valid(),
        "rho0": rs.rho0,
        "faces": e.faces,
        "components": e.components,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn nasm(m: usize, n: usize, h: usize, k: usize) -> Result<String, JsValue> {
    nasm_json(m, n, h, k).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn nonzero_gha(v: usize, symbols: &str, m: usize, n: usize) -> Result<String, JsValue> {
    nonzero_gha_json(v, symbols, m, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn embed(text: &str, budget: usize) -> Result<String, JsValue> {
    embed_json(text, budget).map_err(|e| JsValue::from_str(&e))
}
