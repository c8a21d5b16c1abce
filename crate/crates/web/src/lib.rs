//! Browser demo: how a lossy operator squeezes the state space and what that
//! costs in discrimination power.
//!
//! The plain functions are ordinary Rust and tested natively; the
//! `#[wasm_bindgen]` wrappers at the bottom hand their results to the page
//! as JSON strings.

use serde::Serialize;
use usdkit::numkernel::{ComplexMatrix, C64};
use usdkit::simulate::{measure_usd, INCONCLUSIVE};
use usdkit::usd::{analyze, optimal_pair};
use usdkit::{LossyOperator, StateSet};
use wasm_bindgen::prelude::*;

/// Largest shot count the page may request in one call.
pub const MAX_SHOTS: u64 = 5_000_000;

/// A real point in the plane spanned by the two singular vectors.
pub type Point = [f64; 2];

#[derive(Clone, Debug, Serialize)]
pub struct Geometry {
    pub s_min: f64,
    pub s_max: f64,
    /// Unit circle of inputs.
    pub circle: Vec<Point>,
    /// Its image under `K = diag(s_max, s_min)`.
    pub ellipse: Vec<Point>,
    /// Optimal pair, normalized.
    pub g_plus: Point,
    pub g_minus: Point,
    /// Images of the normalized pair; orthogonal by construction.
    pub out_plus: Point,
    pub out_minus: Point,
    pub angle_rad: f64,
    pub angle_deg: f64,
    pub detection_probability: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AngleCurve {
    /// `x = s_min/s_max`.
    pub x: Vec<f64>,
    pub best_angle: Vec<f64>,
    pub lower_bound: Vec<f64>,
    pub upper_bound: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DetectionTrial {
    pub shots: u64,
    pub seed: u64,
    pub analytic: f64,
    /// Conclusive frequency per input of the optimal pair.
    pub frequencies: Vec<f64>,
    pub standard_error: f64,
    pub misidentifications: u64,
}

fn check_singular_values(s_min: f64, s_max: f64) -> Result<(), String> {
    if !(s_min.is_finite() && s_max.is_finite()) {
        return Err("singular values must be finite".into());
    }
    if !(0.0 < s_min && s_min <= s_max && s_max <= 1.0) {
        return Err(format!(
            "need 0 < s_min ≤ s_max ≤ 1, got s_min = {s_min}, s_max = {s_max}"
        ));
    }
    Ok(())
}

fn operator(s_min: f64, s_max: f64) -> Result<LossyOperator, String> {
    LossyOperator::new(ComplexMatrix::from_diag(&[s_max, s_min])).map_err(|e| e.to_string())
}

fn real_unit(v: &[C64]) -> Point {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    [v[0].re / n, v[1].re / n]
}

/// Circle, ellipse and the optimal pair for `K = diag(s_max, s_min)`.
pub fn geometry(s_min: f64, s_max: f64, samples: usize) -> Result<Geometry, String> {
    check_singular_values(s_min, s_max)?;
    let samples = samples.clamp(8, 2048);
    let k = operator(s_min, s_max)?;
    let pair = optimal_pair(&k).map_err(|e| e.to_string())?;
    let circle: Vec<Point> = (0..=samples)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / samples as f64;
            [t.cos(), t.sin()]
        })
        .collect();
    let ellipse = circle.iter().map(|[x, y]| [s_max * x, s_min * y]).collect();
    let g_plus = real_unit(&pair.g_plus);
    let g_minus = real_unit(&pair.g_minus);
    Ok(Geometry {
        s_min,
        s_max,
        circle,
        ellipse,
        out_plus: [s_max * g_plus[0], s_min * g_plus[1]],
        out_minus: [s_max * g_minus[0], s_min * g_minus[1]],
        g_plus,
        g_minus,
        angle_rad: pair.angle_rad,
        angle_deg: pair.angle_rad.to_degrees(),
        detection_probability: pair.detection_probability,
    })
}

/// `θ_best = 2·atan(x)` against its bounds `1.5x` and `2x` on `x ∈ (0, 1]`.
pub fn angle_curve(points: usize) -> AngleCurve {
    let points = points.clamp(2, 4096);
    let x: Vec<f64> = (1..=points).map(|i| i as f64 / points as f64).collect();
    let best = x
        .iter()
        .map(|&x| analyze(&operator(x, 1.0).expect("diagonal operators are square")).best_angle_rad)
        .collect();
    AngleCurve {
        lower_bound: x.iter().map(|x| 1.5 * x).collect(),
        upper_bound: x.iter().map(|x| 2.0 * x).collect(),
        best_angle: best,
        x,
    }
}

/// Samples the optimal pair of `K = diag(s_max, s_min)`.
pub fn detection_trial(
    s_min: f64,
    s_max: f64,
    shots: u64,
    seed: u64,
) -> Result<DetectionTrial, String> {
    check_singular_values(s_min, s_max)?;
    if shots == 0 || shots > MAX_SHOTS {
        return Err(format!("shots must be between 1 and {MAX_SHOTS}"));
    }
    let k = operator(s_min, s_max)?;
    let pair = optimal_pair(&k).map_err(|e| e.to_string())?;
    let set = StateSet::from_columns(&[pair.g_plus.clone(), pair.g_minus.clone()])
        .map_err(|e| e.to_string())?;
    let results = measure_usd(&k, &set, shots, seed).map_err(|e| e.to_string())?;
    let p = pair.detection_probability;
    let mut misidentifications = 0;
    let frequencies = results
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let own = r.count(&i.to_string());
            misidentifications += r.shots - own - r.count(INCONCLUSIVE);
            own as f64 / shots as f64
        })
        .collect();
    Ok(DetectionTrial {
        shots,
        seed,
        analytic: p,
        frequencies,
        standard_error: (p * (1.0 - p) / shots as f64).sqrt(),
        misidentifications,
    })
}

fn to_json<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let value = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = geometry)]
pub fn geometry_json(s_min: f64, s_max: f64, samples: usize) -> Result<String, JsError> {
    to_json(geometry(s_min, s_max, samples))
}

#[wasm_bindgen(js_name = angleCurve)]
pub fn angle_curve_json(points: usize) -> Result<String, JsError> {
    to_json(Ok(angle_curve(points)))
}

/// `seed` arrives as a JS number; it is truncated to an unsigned integer.
#[wasm_bindgen(js_name = detectionTrial)]
pub fn detection_trial_json(
    s_min: f64,
    s_max: f64,
    shots: u32,
    seed: f64,
) -> Result<String, JsError> {
    let seed = if seed.is_finite() && seed >= 0.0 {
        seed as u64
    } else {
        0
    };
    to_json(detection_trial(s_min, s_max, u64::from(shots), seed))
}
