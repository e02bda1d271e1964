//! Browser bindings: overlap explorer, h-function curves, Wigner functionals.
//! Each binding returns JSON text; the `*_json` functions are the same calls
//! without the JS boundary.

use fermiwig::expr::parse_operator;
use fermiwig::overlaps::{h_closed_form, h_values_f64, overlap_analytic, overlap_direct};
use fermiwig::ring::parse_rational;
use fermiwig::serialize::TextForm;
use fermiwig::wigner::{weyl_transform, wigner_transform, PhaseSpace};
use fermiwig::{Coeff, GenClass, ModeSet, ParamFn, Qs2, Registry};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest `K` offered by the demo; keeps the Wigner transform interactive.
pub const MAX_K: usize = 2;

fn modes(k: usize) -> Result<ModeSet, String> {
    if k == 0 || k > MAX_K {
        return Err(format!("k-points must be between 1 and {MAX_K}"));
    }
    Ok(ModeSet::new(k))
}

pub fn overlap_json(c1: i64, c2: i64, t: &str, k: usize) -> Result<String, String> {
    let modes = modes(k)?;
    let t = Qs2::from_rational(&parse_rational(t)?);
    let h = h_closed_form::<Qs2>(c1, c2, &t).map_err(|e| e.to_string())?;
    let reg = Registry::new();
    let err = |e: fermiwig::Error| e.to_string();
    let astar = ParamFn::fresh(&reg, "A*", &modes, GenClass::FockParameter).map_err(err)?;
    let b = ParamFn::fresh(&reg, "B", &modes, GenClass::FockParameter).map_err(err)?;
    let analytic = overlap_analytic(c1, c2, &astar, &b, &t, &modes).map_err(err)?;
    let direct = overlap_direct(c1, c2, &astar, &b, &t, &modes).map_err(err)?;
    let h_rows: Vec<_> = [
        ("h0 [A*◇B]", &h.h0[0]),
        ("h0 [B f◇ B]", &h.h0[1]),
        ("h0 [A* f◇ A*]", &h.h0[2]),
        ("h1", &h.h1),
        ("h2", &h.h2),
        ("h3", &h.h3),
        ("h5", &h.h5),
        ("h6", &h.h6),
        ("h7", &h.h7),
    ]
    .iter()
    .map(|(n, v)| json!([n, v.to_text()]))
    .collect();
    Ok(json!({
        "d": h.d.to_text(),
        "h": h_rows,
        "overlap": analytic.to_text(Some(&reg)),
        "agrees": analytic == direct,
    })
    .to_string())
}

/// `steps + 1` samples of the ten h-components on `[0, t_max]`; points where
/// `1 + c₁c₂t² = 0` are `null`.
pub fn h_curves_json(c1: i64, c2: i64, t_max: f64, steps: usize) -> Result<String, String> {
    if !(1..=2000).contains(&steps) || !t_max.is_finite() {
        return Err("steps must be in 1..=2000 and t_max finite".into());
    }
    if c1.abs() != 1 || c2.abs() != 1 {
        return Err("c1 and c2 must be ±1".into());
    }
    let rows: Vec<_> = (0..=steps)
        .map(|j| {
            let t = t_max * j as f64 / steps as f64;
            match h_values_f64(c1, c2, t) {
                Ok(h) => json!({ "t": t, "h": h.iter().map(|x| if x.is_finite() { json!(x) } else { json!(null) }).collect::<Vec<_>>() }),
                Err(_) => json!({ "t": t, "h": null }),
            }
        })
        .collect();
    Ok(json!({ "names": ["h0a", "h0b", "h0c", "h1", "h2", "h3", "h4", "h5", "h6", "h7"], "rows": rows }).to_string())
}

pub fn wigner_json(op: &str, k: usize) -> Result<String, String> {
    let modes = modes(k)?;
    let err = |e: fermiwig::Error| e.to_string();
    let reg = Registry::new();
    let ps = PhaseSpace::<Qs2>::new(&modes, &reg).map_err(err)?;
    let op = parse_operator::<Qs2>(op, &modes).map_err(err)?;
    let w = wigner_transform(&op, &ps).map_err(err)?;
    let back = weyl_transform(&w, &ps).map_err(err)?;
    Ok(json!({
        "w": w.value.to_text(Some(&reg)),
        "canonical": w.to_canonical(),
        "roundtrip": back.action_eq(&op),
    })
    .to_string())
}

fn js<T>(r: Result<T, String>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn overlap(c1: i32, c2: i32, t: &str, k: usize) -> Result<String, JsError> {
    js(overlap_json(c1.into(), c2.into(), t, k))
}

#[wasm_bindgen]
pub fn h_curves(c1: i32, c2: i32, t_max: f64, steps: usize) -> Result<String, JsError> {
    js(h_curves_json(c1.into(), c2.into(), t_max, steps))
}

#[wasm_bindgen]
pub fn wigner(op: &str, k: usize) -> Result<String, JsError> {
    js(wigner_json(op, k))
}
