//! Periodic pyramid (cascade) transform.

use faer::Mat;

use super::WaveletSystem;
use crate::error::{Error, Result};
use crate::panel::{CoefficientLayout, CoefficientPanel, CurvePanel, Grid};

/// One analysis step on a periodic signal of even length.
fn analysis_step(h: &[f64], g: &[f64], signal: &[f64], approx: &mut [f64], detail: &mut [f64]) {
    let len = signal.len();
    let half = len / 2;
    for k in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        for (i, (&hi, &gi)) in h.iter().zip(g).enumerate() {
            let s = signal[(2 * k + i) % len];
            a += hi * s;
            d += gi * s;
        }
        approx[k] = a;
        detail[k] = d;
    }
}

/// Adjoint of [`analysis_step`], which is its inverse since the step is orthogonal.
fn synthesis_step(h: &[f64], g: &[f64], approx: &[f64], detail: &[f64], out: &mut [f64]) {
    let len = out.len();
    out.iter_mut().for_each(|x| *x = 0.0);
    for k in 0..approx.len() {
        let (a, d) = (approx[k], detail[k]);
        for (i, (&hi, &gi)) in h.iter().zip(g).enumerate() {
            out[(2 * k + i) % len] += hi * a + gi * d;
        }
    }
}

/// Uncalibrated transform of one sampled curve into `layout` order.
///
/// Detail levels above `jmax` are discarded, so the output is the
/// orthogonal projection onto `V_{jmax+1}`.
pub fn decompose_curve(sys: &WaveletSystem, layout: &CoefficientLayout, samples: &[f64]) -> Vec<f64> {
    let top = layout.grid_len.trailing_zeros();
    let mut out = vec![0.0; layout.len()];
    let mut current = samples.to_vec();
    let mut approx = vec![0.0; samples.len() / 2];
    let mut detail = vec![0.0; samples.len() / 2];
    for level in (layout.j0..top).rev() {
        let half = 1usize << level;
        analysis_step(&sys.filter_h, &sys.filter_g, &current, &mut approx[..half], &mut detail[..half]);
        if level <= layout.jmax {
            out[half..2 * half].copy_from_slice(&detail[..half]);
        }
        current.truncate(half);
        current.copy_from_slice(&approx[..half]);
    }
    out[..current.len()].copy_from_slice(&current);
    out
}

/// Inverse of [`decompose_curve`]; discarded fine levels come back as zero.
pub fn reconstruct_curve(sys: &WaveletSystem, layout: &CoefficientLayout, coeffs: &[f64]) -> Vec<f64> {
    let top = layout.grid_len.trailing_zeros();
    let mut current = coeffs[..1 << layout.j0].to_vec();
    let zeros = vec![0.0; layout.grid_len / 2];
    for level in layout.j0..top {
        let half = 1usize << level;
        let detail = if level <= layout.jmax { &coeffs[half..2 * half] } else { &zeros[..half] };
        let mut next = vec![0.0; 2 * half];
        synthesis_step(&sys.filter_h, &sys.filter_g, &current, detail, &mut next);
        current = next;
    }
    current
}

/// Calibrated coefficients of every curve in `panel`.
pub fn decompose(panel: &CurvePanel, sys: &WaveletSystem) -> Result<CoefficientPanel> {
    let layout = sys.check_grid(&panel.grid)?;
    let scale = panel.grid.spacing.sqrt();
    let n = panel.n_curves();
    let columns: Vec<Vec<f64>> = crate::par::map_indexed(n, |t| {
        let mut c = decompose_curve(sys, &layout, &panel.curve(t));
        c.iter_mut().for_each(|x| *x *= scale);
        c
    });
    let coeffs = Mat::from_fn(layout.len(), n, |j, t| columns[t][j]);
    CoefficientPanel::new(coeffs, layout, scale)
}

/// Samples the curves described by `coeffs` on `grid`, undoing the calibration.
pub fn reconstruct(coeffs: &CoefficientPanel, sys: &WaveletSystem, grid: &Grid) -> Result<CurvePanel> {
    let layout = sys.check_grid(grid)?;
    if layout != coeffs.layout {
        return Err(Error::LayoutMismatch(format!(
            "coefficients use {:?}, system and grid give {:?}",
            coeffs.layout, layout
        )));
    }
    let scale = grid.spacing.sqrt();
    let n = coeffs.n_curves();
    let rows: Vec<Vec<f64>> = crate::par::map_indexed(n, |t| {
        let mut v = reconstruct_curve(sys, &layout, &coeffs.column(t));
        v.iter_mut().for_each(|x| *x /= scale);
        v
    });
    CurvePanel::new(*grid, Mat::from_fn(n, grid.len, |t, j| rows[t][j]))
}
