//! Square-root density curves.
//!
//! A curve `g` with `∫ g² = 1` squares to a density. Wavelet coefficients
//! preserve the L² norm, so normalising `g` only needs the Euclidean norm of
//! its (calibrated) coefficient vector.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::{CoefficientLayout, CoefficientPanel, CurvePanel, Grid};
use crate::wavelet::{decompose, reconstruct, WaveletSystem};

const ZERO_NORM: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqrtDensityCurve {
    /// Calibrated coefficients with unit Euclidean norm.
    pub coeffs: Vec<f64>,
    pub grid: Grid,
}

/// Divides `coeffs` by their norm.
pub fn normalize_sqrt_density(coeffs: &[f64], grid: Grid) -> Result<SqrtDensityCurve> {
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !(norm >= ZERO_NORM) {
        return Err(Error::ZeroCurve);
    }
    Ok(SqrtDensityCurve { coeffs: coeffs.iter().map(|c| c / norm).collect(), grid })
}

/// Decomposes each sampled √density curve and normalises it.
pub fn sqrt_density_curves(panel: &CurvePanel, sys: &WaveletSystem) -> Result<Vec<SqrtDensityCurve>> {
    let coeffs = decompose(panel, sys)?;
    (0..coeffs.n_curves())
        .map(|t| normalize_sqrt_density(&coeffs.column(t), panel.grid))
        .collect()
}

/// Reconstructs `ǧ` and squares it pointwise; one output curve.
pub fn square_to_density(curve: &SqrtDensityCurve, sys: &WaveletSystem) -> Result<CurvePanel> {
    let layout: CoefficientLayout = sys.check_grid(&curve.grid)?;
    if layout.len() != curve.coeffs.len() {
        return Err(Error::LayoutMismatch(format!(
            "{} coefficients for a layout of {}",
            curve.coeffs.len(),
            layout.len()
        )));
    }
    let coeffs = Mat::from_fn(layout.len(), 1, |j, _| curve.coeffs[j]);
    let panel = CoefficientPanel::new(coeffs, layout, curve.grid.spacing.sqrt())?;
    let g = reconstruct(&panel, sys, &curve.grid)?;
    let squared = Mat::from_fn(1, curve.grid.len, |_, x| g.values[(0, x)].powi(2));
    CurvePanel::new(curve.grid, squared)
}
