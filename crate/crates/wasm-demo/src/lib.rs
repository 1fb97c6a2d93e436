//! Browser bindings for three plots: `F(t)`, `S(C)` and the certified bound
//! against the margin `ε`. Curves come back as flat `[x0, y0, x1, y1, …]` arrays.

use levinson_core::curves::{self, log_space};
use levinson_core::domar::TruncationPolicy;
use levinson_core::pipeline::CylinderSpec;
use levinson_core::{CertError, Majorant};
use wasm_bindgen::prelude::*;

fn flatten(rows: Vec<(f64, f64)>) -> Vec<f64> {
    rows.into_iter().flat_map(|(a, b)| [a, b]).collect()
}

pub fn distribution_points(
    majorant: &str,
    height: f64,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> Result<Vec<f64>, CertError> {
    let m = Majorant::parse(majorant, height)?;
    Ok(flatten(curves::distribution_curve(&m, height, &log_space(t_min, t_max, points)?)?))
}

pub fn sum_points(majorant: &str, height: f64, c_min: f64, c_max: f64, points: usize) -> Result<Vec<f64>, CertError> {
    let m = Majorant::parse(majorant, height)?;
    let cs = log_space(c_min, c_max, points)?;
    Ok(flatten(curves::sum_curve(&m, height, &cs, &TruncationPolicy::default())?))
}

/// Rows `(ε, log bound, log-log bound)`; the log bound is `+∞` once it overflows.
pub fn bound_points(n: u32, radius: f64, height: f64, majorant: &str, points: usize) -> Result<Vec<f64>, CertError> {
    let m = Majorant::parse(majorant, height)?;
    let probe = CylinderSpec::new(n, radius, height, 0.5 * radius.min(height))?;
    Ok(curves::bound_curve(&probe, &m, points)?
        .into_iter()
        .flat_map(|p| [p.eps, p.log_bound, p.loglog_bound])
        .collect())
}

fn js(e: CertError) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn distribution_curve(
    majorant: &str,
    height: f64,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    distribution_points(majorant, height, t_min, t_max, points).map_err(js)
}

#[wasm_bindgen]
pub fn domar_sum_curve(
    majorant: &str,
    height: f64,
    c_min: f64,
    c_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    sum_points(majorant, height, c_min, c_max, points).map_err(js)
}

#[wasm_bindgen]
pub fn bound_vs_eps(n: u32, radius: f64, height: f64, majorant: &str, points: usize) -> Result<Vec<f64>, JsError> {
    bound_points(n, radius, height, majorant, points).map_err(js)
}
