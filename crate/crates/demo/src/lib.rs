//! WebAssembly bindings for the browser page in `www/`.

use polyweb::cli::{render_polytope_svg, render_svg, RenderOptions};
use polyweb::polytope::{classify, Polytope, PolytopeClass};
use polyweb::web::{connect, enumerate_fano};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn polytope(text: &str) -> Result<Polytope, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

fn class(name: &str) -> Result<PolytopeClass, String> {
    name.parse().map_err(|e: polyweb::Error| e.to_string())
}

pub fn classify_json(input: &str) -> Result<String, String> {
    let p = polytope(input)?;
    let svg = render_polytope_svg(&p, RenderOptions::default()).map_err(|e| e.to_string())?;
    Ok(json!({ "polytope": p, "flags": classify(&p), "svg": svg }).to_string())
}

pub fn connect_json(from: &str, to: &str, class_name: &str, cell: u32) -> Result<String, String> {
    let cert = connect(&polytope(from)?, &polytope(to)?, class(class_name)?).map_err(|e| e.to_string())?;
    let svg = render_svg(&cert, RenderOptions { cell_size: cell }).map_err(|e| e.to_string())?;
    let word: Vec<String> = cert.sequence.steps.iter().map(|l| l.kind.to_string()).collect();
    Ok(json!({ "svg": svg, "panels": cert.chain.len(), "links": word, "certificate": cert }).to_string())
}

pub fn enumerate_json(bound: i64, class_name: &str, mfp_only: bool) -> Result<String, String> {
    if !(1..=4).contains(&bound) {
        return Err("box must be between 1 and 4".into());
    }
    let census = enumerate_fano(bound, class(class_name)?, mfp_only);
    let svgs: Vec<String> = census
        .classes
        .iter()
        .map(|c| render_polytope_svg(&c.normal_form, RenderOptions { cell_size: 12 }).unwrap_or_default())
        .collect();
    Ok(json!({ "census": census, "svgs": svgs }).to_string())
}

/// Class flags and a drawing of a polygon given as `{"dim": 2, "points": [...]}`.
#[wasm_bindgen]
pub fn classify_polygon(input: &str) -> Result<String, JsError> {
    classify_json(input).map_err(|e| JsError::new(&e))
}

/// Certificate and SVG chain connecting two polygons inside a class.
#[wasm_bindgen]
pub fn connect_polygons(from: &str, to: &str, class_name: &str, cell: u32) -> Result<String, JsError> {
    connect_json(from, to, class_name, cell).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn enumerate_polygons(bound: i64, class_name: &str, mfp_only: bool) -> Result<String, JsError> {
    enumerate_json(bound, class_name, mfp_only).map_err(|e| JsError::new(&e))
}
