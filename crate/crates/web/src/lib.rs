//! Browser bindings. Every function takes an arrangement as a preset name
//! (`braid-3`, `generic-4-2`, ...) or as JSON text, and returns JSON text.

use arrhom::arrangement::Arrangement;
use arrhom::theorems::{self, Mode, VerifyOptions};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest arrangement the page will attempt.
const MAX_HYPERPLANES: usize = 8;

fn parse(input: &str) -> Result<Arrangement, String> {
    let text = input.trim();
    let arr = if text.starts_with('{') { Arrangement::from_json(text) } else { Arrangement::preset(text) }
        .map_err(|e| e.to_string())?;
    if arr.len() > MAX_HYPERPLANES {
        return Err(format!("{} hyperplanes; the demo handles at most {MAX_HYPERPLANES}", arr.len()));
    }
    Ok(arr)
}

pub fn lattice_json(input: &str) -> Result<String, String> {
    let arr = parse(input)?;
    let l = arr.build_lattice().map_err(|e| e.to_string())?;
    let p = l.poset();
    let elements: Vec<_> = (0..l.len())
        .map(|x| json!({"id": x, "rank": p.rank(x), "dim": l.label(x).dim(), "hyperplanes": l.hyperplanes_containing(x)}))
        .collect();
    let v = json!({
        "summary": theorems::Summary::of(&l),
        "elements": elements,
        "edges": p.cover_pairs(),
    });
    Ok(v.to_string())
}

pub fn charpoly_json(input: &str) -> Result<String, String> {
    let l = parse(input)?.build_lattice().map_err(|e| e.to_string())?;
    let chi = l.char_poly();
    let perp = l.char_poly_perp();
    let derivs = |p: &arrhom::charpoly::CharPoly| -> Vec<String> {
        (0..=p.degree().unwrap_or(0)).map(|k| arrhom::exactlin::format_rational(&p.derivative_at_one(k))).collect()
    };
    let v = json!({
        "char_poly": chi.to_string(),
        "char_poly_perp": perp.to_string(),
        "center_dim": l.center().dim(),
        "derivatives_at_one": derivs(&chi),
        "perp_derivatives_at_one": derivs(&perp),
        "cellular_graded_euler": theorems::expected_cellular_graded_euler(&l).render("q"),
        "sheaf_graded_euler": theorems::expected_sheaf_graded_euler(&l).render("q"),
    });
    Ok(v.to_string())
}

pub fn verify_json(input: &str, mode: &str) -> Result<String, String> {
    let arr = parse(input)?;
    let mode = match mode {
        "cellular" => Mode::Cellular,
        "sheaf" => Mode::Sheaf,
        "both" => Mode::Both,
        other => return Err(format!("unknown mode {other:?}")),
    };
    let opts = VerifyOptions { mode, max_chains: 200_000, ..VerifyOptions::default() };
    let report = theorems::verify_lattice(&arr.build_lattice().map_err(|e| e.to_string())?, &opts).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// Lattice summary, elements and Hasse edges.
#[wasm_bindgen]
pub fn lattice(input: &str) -> Result<String, JsValue> {
    lattice_json(input).map_err(|e| JsValue::from_str(&e))
}

/// Characteristic polynomials, derivatives at 1 and expected graded Euler
/// characteristics.
#[wasm_bindgen]
pub fn charpoly(input: &str) -> Result<String, JsValue> {
    charpoly_json(input).map_err(|e| JsValue::from_str(&e))
}

/// Computed and predicted homology tables with all checks.
#[wasm_bindgen]
pub fn homology(input: &str, mode: &str) -> Result<String, JsValue> {
    verify_json(input, mode).map_err(|e| JsValue::from_str(&e))
}
