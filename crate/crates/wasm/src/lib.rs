//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each exported function is a thin wrapper over a plain Rust function of
//! the same name in [`demo`], which is what the native tests exercise.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js_err(e: fxround::error::FxError) -> JsError {
    JsError::new(&e.to_string())
}

/// Rounding laws over `[lo, hi]`. Returns `samples` rows of
/// `[x, p, expected, bias, variance]`, flattened.
#[wasm_bindgen]
pub fn rounding_curves(mode: &str, frac_bits: u32, lo: f64, hi: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    demo::rounding_curves(mode, frac_bits, lo, hi, samples).map_err(js_err)
}

/// Table-2 style study for RN, CSR and RR. Returns
/// `[|B|, N_z, saturations]` per mode in that order, flattened.
#[wasm_bindgen]
pub fn dotprod_study(n: usize, n_max: usize, frac_bits: u32, y_max: f64, seed: u64) -> Result<Vec<f64>, JsError> {
    demo::dotprod_study(n, n_max, frac_bits, y_max, seed).map_err(js_err)
}

/// Rounds `x` `draws` times. Returns rows of
/// `[outcome, observed frequency, exact probability]`, flattened.
#[wasm_bindgen]
pub fn outcome_histogram(x: f64, frac_bits: u32, mode: &str, draws: u32, seed: u64) -> Result<Vec<f64>, JsError> {
    demo::outcome_histogram(x, frac_bits, mode, draws, seed).map_err(js_err)
}
