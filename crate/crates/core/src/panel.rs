//! Sampled curves and their wavelet coefficients.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniform grid `start + i * spacing`, `i = 0..len`, covering the
/// half-open interval `[start, start + len * spacing)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub spacing: f64,
    pub len: usize,
}

impl Grid {
    pub fn new(start: f64, spacing: f64, len: usize) -> Result<Self> {
        if len == 0 || !(spacing > 0.0) || !start.is_finite() || !spacing.is_finite() {
            return Err(Error::InvalidPanel(format!(
                "grid needs len > 0 and positive finite spacing (len {len}, spacing {spacing})"
            )));
        }
        Ok(Self { start, spacing, len })
    }

    /// `len` points evenly spaced on `[a, b)`.
    pub fn on_interval(a: f64, b: f64, len: usize) -> Result<Self> {
        if !(b > a) {
            return Err(Error::InvalidPanel(format!("interval [{a}, {b}) is empty")));
        }
        Self::new(a, (b - a) / len as f64, len)
    }

    pub fn unit(len: usize) -> Result<Self> {
        Self::on_interval(0.0, 1.0, len)
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.start, self.start + self.len as f64 * self.spacing)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.spacing
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.point(i)).collect()
    }

    pub fn is_dyadic(&self) -> bool {
        self.len.is_power_of_two()
    }

    /// `log2(len)` for dyadic grids.
    pub fn levels(&self) -> Result<u32> {
        if !self.is_dyadic() {
            return Err(Error::GridNotDyadic(self.len));
        }
        Ok(self.len.trailing_zeros())
    }

    /// Periodic trapezoid rule for `∫ f g` over the grid interval.
    ///
    /// On a periodic grid the composite trapezoid rule reduces to
    /// `spacing * Σ f_i g_i`.
    pub fn inner_product(&self, f: &[f64], g: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), g.len());
        self.spacing * f.iter().zip(g).map(|(a, b)| a * b).sum::<f64>()
    }
}

/// `n` curves sampled on a shared grid; row `t` is the curve at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePanel {
    pub grid: Grid,
    pub values: Mat<f64>,
}

impl CurvePanel {
    pub fn new(grid: Grid, values: Mat<f64>) -> Result<Self> {
        if values.ncols() != grid.len {
            return Err(Error::InvalidPanel(format!(
                "curves have {} samples but the grid has {} points",
                values.ncols(),
                grid.len
            )));
        }
        if values.nrows() == 0 {
            return Err(Error::InvalidPanel("panel has no curves".into()));
        }
        for j in 0..values.ncols() {
            for i in 0..values.nrows() {
                if !values[(i, j)].is_finite() {
                    return Err(Error::InvalidPanel(format!("non-finite value at curve {i}, point {j}")));
                }
            }
        }
        Ok(Self { grid, values })
    }

    pub fn from_rows(grid: Grid, rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != grid.len) {
            return Err(Error::InvalidPanel(format!(
                "curve {bad} has {} samples, grid has {}",
                rows[bad].len(),
                grid.len
            )));
        }
        Self::new(grid, Mat::from_fn(n, grid.len, |i, j| rows[i][j]))
    }

    pub fn n_curves(&self) -> usize {
        self.values.nrows()
    }

    pub fn curve(&self, t: usize) -> Vec<f64> {
        (0..self.values.ncols()).map(|j| self.values[(t, j)]).collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n_curves()).map(|t| self.curve(t)).collect()
    }

    /// Pointwise mean curve over time.
    pub fn mean_curve(&self) -> Vec<f64> {
        let n = self.n_curves() as f64;
        (0..self.grid.len)
            .map(|j| (0..self.n_curves()).map(|t| self.values[(t, j)]).sum::<f64>() / n)
            .collect()
    }
}

/// Maps `(level, shift)` pairs to rows of a coefficient matrix.
///
/// Rows `0..2^j0` hold the approximation coefficients at level `j0`; detail
/// level `j` (for `j0 <= j <= jmax`) occupies rows `2^j..2^(j+1)`. The total
/// count is `J = 2^(jmax+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientLayout {
    pub j0: u32,
    pub jmax: u32,
    pub grid_len: usize,
}

/// A coefficient slot in a [`CoefficientLayout`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientIndex {
    Approximation { level: u32, shift: usize },
    Detail { level: u32, shift: usize },
}

impl CoefficientLayout {
    pub fn new(j0: u32, jmax: u32, grid_len: usize) -> Result<Self> {
        if j0 > jmax {
            return Err(Error::BadLevels { j0, jmax });
        }
        if !grid_len.is_power_of_two() {
            return Err(Error::GridNotDyadic(grid_len));
        }
        let needed = 1usize
            .checked_shl(jmax + 1)
            .ok_or(Error::BadLevels { j0, jmax })?;
        if grid_len < needed {
            return Err(Error::LevelsExceedGrid { jmax, needed, len: grid_len });
        }
        Ok(Self { j0, jmax, grid_len })
    }

    /// Number of coefficients `J`.
    pub fn len(&self) -> usize {
        1 << (self.jmax + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn approximation_rows(&self) -> std::ops::Range<usize> {
        0..(1 << self.j0)
    }

    pub fn detail_rows(&self, level: u32) -> std::ops::Range<usize> {
        debug_assert!(level >= self.j0 && level <= self.jmax);
        (1 << level)..(1 << (level + 1))
    }

    /// All detail rows, levels `j0..=jmax`.
    pub fn all_detail_rows(&self) -> std::ops::Range<usize> {
        (1 << self.j0)..self.len()
    }

    pub fn levels(&self) -> impl Iterator<Item = u32> {
        self.j0..=self.jmax
    }

    pub fn row(&self, idx: CoefficientIndex) -> Option<usize> {
        match idx {
            CoefficientIndex::Approximation { level, shift } => {
                (level == self.j0 && shift < (1 << level)).then_some(shift)
            }
            CoefficientIndex::Detail { level, shift } => (level >= self.j0
                && level <= self.jmax
                && shift < (1 << level))
                .then_some((1 << level) + shift),
        }
    }

    pub fn index(&self, row: usize) -> Option<CoefficientIndex> {
        if row >= self.len() {
            return None;
        }
        if row < (1 << self.j0) {
            return Some(CoefficientIndex::Approximation { level: self.j0, shift: row });
        }
        let level = usize::BITS - 1 - row.leading_zeros();
        Some(CoefficientIndex::Detail { level, shift: row - (1 << level) })
    }
}

/// `J × n` matrix of wavelet coefficients; column `t` describes curve `t`.
///
/// Coefficients carry the calibration factor `sqrt(Δx)` so that the dot
/// product of two columns approximates the L² inner product of the curves.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPanel {
    pub coeffs: Mat<f64>,
    pub layout: CoefficientLayout,
    pub calibration: f64,
}

impl CoefficientPanel {
    pub fn new(coeffs: Mat<f64>, layout: CoefficientLayout, calibration: f64) -> Result<Self> {
        if coeffs.nrows() != layout.len() {
            return Err(Error::LayoutMismatch(format!(
                "layout expects {} rows, matrix has {}",
                layout.len(),
                coeffs.nrows()
            )));
        }
        Ok(Self { coeffs, layout, calibration })
    }

    pub fn n_curves(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn n_coefficients(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn column(&self, t: usize) -> Vec<f64> {
        (0..self.coeffs.nrows()).map(|j| self.coeffs[(j, t)]).collect()
    }

    /// Same layout and calibration, different coefficients.
    pub fn with_coeffs(&self, coeffs: Mat<f64>) -> Result<Self> {
        Self::new(coeffs, self.layout, self.calibration)
    }
}
