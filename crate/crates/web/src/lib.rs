//! Browser bindings: generate a net, inspect its elementary intervals and
//! follow the star discrepancy as the shrinking factor grows.
//!
//! Every export returns a JSON string; the plain `*_json` functions hold the
//! logic so they can be tested natively.

use polyfrolov::algebra::Field;
use polyfrolov::lattice::ShrinkFactor;
use polyfrolov::netanalysis::{exact_t, interval_counts};
use polyfrolov::pointgen::{build_net, DigitPointSet};
use polyfrolov::quality::{discrepancy_bound, star_discrepancy_exact};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest point set the page will draw.
pub const MAX_POINTS: u128 = 1 << 14;

fn net(b: u32, n: u32, r: u32) -> Result<DigitPointSet, String> {
    let f = Field::new(b).map_err(|e| e.to_string())?;
    if n == 0 || n > 2 {
        return Err("n must be 1 or 2".into());
    }
    let d = (b as usize).pow(n);
    if d > 9 {
        return Err(format!("d = {d} is too large for the demo"));
    }
    let size = (b as u128).checked_pow(d as u32 * r);
    if size.is_none_or(|s| s > MAX_POINTS) {
        return Err(format!("more than {MAX_POINTS} points"));
    }
    let net = build_net(f, n, &ShrinkFactor::uniform(f, d, r as usize), None, None)
        .map_err(|e| e.to_string())?;
    Ok(net.points.generator.materialize())
}

#[derive(Serialize)]
struct NetView {
    b: u32,
    n: u32,
    d: usize,
    m: u32,
    t: u32,
    points: Vec<Vec<f64>>,
}

pub fn net_points_json(b: u32, n: u32, r: u32) -> Result<String, String> {
    let p = net(b, n, r)?;
    let t = exact_t(&p).map_err(|e| e.to_string())?;
    let view = NetView { b, n, d: p.d, m: p.m, t, points: p.to_floats() };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct IntervalView {
    l: [usize; 2],
    expected: u128,
    counts: Vec<u32>,
    balanced: bool,
}

/// Counts in the `b^{l1} × b^{l2}` grid of the first two coordinates.
pub fn interval_counts_json(b: u32, n: u32, r: u32, l1: usize, l2: usize) -> Result<String, String> {
    let p = net(b, n, r)?.project(2).map_err(|e| e.to_string())?;
    if l1 + l2 > p.m as usize {
        return Err(format!("l1 + l2 = {} exceeds m = {}", l1 + l2, p.m));
    }
    let counts = interval_counts(&p, &[l1, l2]).map_err(|e| e.to_string())?;
    let expected = (b as u128).pow(p.m - (l1 + l2) as u32);
    let balanced = counts.iter().all(|&c| c as u128 == expected);
    serde_json::to_string(&IntervalView { l: [l1, l2], expected, counts, balanced })
        .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct TrendRow {
    r: u32,
    points: usize,
    m: u32,
    value: f64,
    exact: String,
    bound: f64,
}

/// Exact `D*` of the `n = 1` nets for `r = 1..=r_max`.
pub fn discrepancy_trend_json(b: u32, r_max: u32) -> Result<String, String> {
    let mut rows = Vec::new();
    for r in 1..=r_max {
        let p = net(b, 1, r)?;
        let t = exact_t(&p).map_err(|e| e.to_string())?;
        let ds = star_discrepancy_exact(&p, MAX_POINTS as usize).map_err(|e| e.to_string())?;
        rows.push(TrendRow {
            r,
            points: p.len(),
            m: p.m,
            value: ds.value,
            exact: format!("{}/{}", ds.numerator, ds.denominator),
            bound: discrepancy_bound(p.m, t, p.d, b),
        });
    }
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn net_points(b: u32, n: u32, r: u32) -> Result<String, JsValue> {
    net_points_json(b, n, r).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn elementary_intervals(b: u32, n: u32, r: u32, l1: usize, l2: usize) -> Result<String, JsValue> {
    interval_counts_json(b, n, r, l1, l2).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn discrepancy_trend(b: u32, r_max: u32) -> Result<String, JsValue> {
    discrepancy_trend_json(b, r_max).map_err(|e| JsValue::from_str(&e))
}
