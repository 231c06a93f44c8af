//! Browser bindings. Every export takes plain strings and returns a JSON
//! document; failures come back as `{"error": "..."}`.

use chevpoly::verify::{check_nobody_for, compute, minuscule_report, polytope_report, InstanceSpec};
use chevpoly::{CartanType, Weight, WeylWord};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn spec(ctype: &str, parabolic: &str, weight: &str, word: &str) -> Result<InstanceSpec, String> {
    let ct: CartanType = ctype.trim().parse().map_err(|e: chevpoly::Error| e.to_string())?;
    let nodes = parabolic
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(i) if (1..=ct.rank).contains(&i) => Ok(i - 1),
            _ => Err(format!("bad parabolic node '{t}'")),
        })
        .collect::<Result<_, _>>()?;
    let weight: Weight = weight.parse().map_err(|e: chevpoly::Error| e.to_string())?;
    let word = match word.trim() {
        "" | "auto" => None,
        w => Some(WeylWord::parse(w).map_err(|e| e.to_string())?),
    };
    InstanceSpec::new(ct, nodes, weight, word).map_err(|e| e.to_string())
}

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Valuation table, vertices, volume and degree.
#[wasm_bindgen]
pub fn chevalley_polytope(ctype: &str, parabolic: &str, weight: &str, word: &str) -> String {
    respond((|| {
        let s = spec(ctype, parabolic, weight, word)?;
        let r = polytope_report(&s).map_err(|e| e.to_string())?;
        serde_json::to_value(r).map_err(|e| e.to_string())
    })())
}

/// Minuscule poset data and the order-polytope comparison.
#[wasm_bindgen]
pub fn minuscule(ctype: &str, node: usize) -> String {
    respond((|| {
        let ct: CartanType = ctype.trim().parse().map_err(|e: chevpoly::Error| e.to_string())?;
        if node == 0 || node > ct.rank {
            return Err(format!("node {node} out of range"));
        }
        let r = minuscule_report(ct, node - 1, 2).map_err(|e| e.to_string())?;
        let passed = r.passed();
        let mut v = serde_json::to_value(r).map_err(|e| e.to_string())?;
        v["passed"] = json!(passed);
        Ok(v)
    })())
}

/// Volume against the degree formula.
#[wasm_bindgen]
pub fn degree_check(ctype: &str, parabolic: &str, weight: &str, word: &str) -> String {
    respond((|| {
        let s = spec(ctype, parabolic, weight, word)?;
        let c = compute(&s).map_err(|e| e.to_string())?;
        let n = check_nobody_for(&s, &c.polytope).map_err(|e| e.to_string())?;
        let mut v = serde_json::to_value(n).map_err(|e| e.to_string())?;
        v["word"] = json!(s.word.to_string());
        v["module_dimension"] = json!(c.module.dim());
        Ok(v)
    })())
}
