//! Browser bindings. Each export takes plain numbers and returns a JSON string;
//! errors surface as JS exceptions carrying the error message.

use robust_overparam::data::sample_domain;
use robust_overparam::network::{coupling_scan, init_network, perturb_columns};
use robust_overparam::poly::sign::SignTerms;
use robust_overparam::poly::step::certify_step;
use robust_overparam::poly::{compressed_power, linspace, step_poly, StepSpec};
use robust_overparam::Result;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_PLOT_POINTS: usize = 5_000;
const MAX_WIDTH: usize = 1 << 14;
const MAX_SAMPLES: usize = 20_000;

fn plot_points(points: usize) -> usize {
    points.clamp(2, MAX_PLOT_POINTS)
}

/// Step polynomial `q` on `[-1, 1]` with its near/far intervals and grid checks.
pub fn step_curve_value(rho: f64, delta: f64, eps1: f64, points: usize) -> Result<Value> {
    let spec = StepSpec::new(rho, delta, eps1)?;
    let q = step_poly(&spec)?;
    let z: Vec<f64> = linspace(-1.0, 1.0, plot_points(points)).collect();
    let y: Vec<f64> = z.iter().map(|&v| q.eval(v)).collect();
    Ok(json!({
        "z": z,
        "q": y,
        "degree": q.degree(),
        "sign_gap": spec.eta_gap(),
        "degree_bound": SignTerms::degree_bound(spec.eta_gap(), eps1),
        "near": spec.near_interval(),
        "far": spec.far_interval(),
        "checks": certify_step(&q, &spec, 10_000),
    }))
}

/// `p_{s,D}` against `z^s` with the pointwise envelope `2 exp(-D^2 / (2s))`.
pub fn compressed_power_value(s: usize, d_cap: f64, points: usize) -> Result<Value> {
    let p = compressed_power(s, d_cap)?;
    let z: Vec<f64> = linspace(-1.0, 1.0, plot_points(points)).collect();
    let approx: Vec<f64> = z.iter().map(|&v| p.eval(v)).collect();
    let exact: Vec<f64> = z.iter().map(|&v| v.powi(s as i32)).collect();
    let max_error = approx.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(json!({
        "z": z,
        "approx": approx,
        "exact": exact,
        "degree": p.degree(),
        "bound": 2.0 * (-d_cap * d_cap / (2.0 * s as f64)).exp(),
        "max_error": max_error,
    }))
}

/// Sup-sample `|f - g|` and flipped-neuron fraction after moving every column by `R m^(-2/3)`.
pub fn coupling_probe_value(m: usize, d: usize, r: f64, samples: usize, seed: u64) -> Result<Value> {
    let m = m.clamp(1, MAX_WIDTH);
    let samples = samples.clamp(1, MAX_SAMPLES);
    let state = init_network(m, d, seed)?;
    let moved = perturb_columns(&state, r, seed)?;
    let (gap, flips) = coupling_scan(&moved, &sample_domain(d, samples, seed, 0))?;
    Ok(json!({
        "m": m,
        "d": d,
        "R": r,
        "samples": samples,
        "gap": gap,
        "flip_fraction": flips as f64 / m as f64,
    }))
}

fn to_js(v: Result<Value>) -> std::result::Result<String, JsValue> {
    v.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn step_curve(rho: f64, delta: f64, eps1: f64, points: usize) -> std::result::Result<String, JsValue> {
    to_js(step_curve_value(rho, delta, eps1, points))
}

#[wasm_bindgen]
pub fn compressed_power_curve(s: usize, d_cap: f64, points: usize) -> std::result::Result<String, JsValue> {
    to_js(compressed_power_value(s, d_cap, points))
}

#[wasm_bindgen]
pub fn coupling_probe(m: usize, d: usize, r: f64, samples: usize, seed: u32) -> std::result::Result<String, JsValue> {
    to_js(coupling_probe_value(m, d, r, samples, seed as u64))
}
