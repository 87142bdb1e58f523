use serde::{Deserialize, Serialize};

use crate::panel::{CoefficientLayout, CoefficientPanel};

/// How the hard-threshold level is chosen for each curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "value", rename_all = "snake_case")]
pub enum ThresholdRule {
    /// `σ̂ √(2 ln N)` with `σ̂ = median(|finest details|) / 0.6745`.
    Universal,
    /// A fixed level shared by all curves.
    Fixed(f64),
}

impl Default for ThresholdRule {
    fn default() -> Self {
        ThresholdRule::Universal
    }
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

/// Universal threshold for one coefficient vector in `layout` order.
pub fn universal_threshold(layout: &CoefficientLayout, coeffs: &[f64]) -> f64 {
    let mut finest: Vec<f64> = coeffs[layout.detail_rows(layout.jmax)].iter().map(|c| c.abs()).collect();
    let sigma = median(&mut finest) / 0.6745;
    sigma * (2.0 * (layout.grid_len as f64).ln()).sqrt()
}

/// Hard-thresholds the detail part of one coefficient vector in place.
pub fn hard_threshold_vector(layout: &CoefficientLayout, coeffs: &mut [f64], rule: ThresholdRule) {
    let level = match rule {
        ThresholdRule::Universal => universal_threshold(layout, coeffs),
        ThresholdRule::Fixed(v) => v,
    };
    for c in &mut coeffs[layout.all_detail_rows()] {
        if c.abs() <= level {
            *c = 0.0;
        }
    }
}

/// Zeroes detail coefficients with `|c| <= λ`, one `λ` per curve.
/// Approximation rows are never touched.
pub fn hard_threshold(coeffs: &CoefficientPanel, rule: ThresholdRule) -> CoefficientPanel {
    let mut out = coeffs.clone();
    let layout = coeffs.layout;
    for t in 0..coeffs.n_curves() {
        let mut col = coeffs.column(t);
        hard_threshold_vector(&layout, &mut col, rule);
        for (j, v) in col.into_iter().enumerate() {
            out.coeffs[(j, t)] = v;
        }
    }
    out
}
