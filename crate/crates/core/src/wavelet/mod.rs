//! Daubechies wavelet systems, the periodic pyramid transform and hard
//! thresholding.

mod filters;
mod threshold;
mod transform;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::panel::{CoefficientLayout, Grid};

pub use threshold::{hard_threshold, hard_threshold_vector, universal_threshold, ThresholdRule};
pub use transform::{decompose, decompose_curve, reconstruct, reconstruct_curve};

/// Wavelet family. Only the orthonormal Daubechies family is supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveletFamily {
    /// Daubechies wavelet with the given number of vanishing moments.
    Daubechies(usize),
}

impl WaveletFamily {
    pub fn vanishing_moments(&self) -> usize {
        match *self {
            WaveletFamily::Daubechies(n) => n,
        }
    }
}

impl fmt::Display for WaveletFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaveletFamily::Daubechies(n) => write!(f, "daub{n}"),
        }
    }
}

impl FromStr for WaveletFamily {
    type Err = Error;

    /// Accepts `daubN`, `dbN` (case-insensitive) and `haar`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "haar" {
            return Ok(WaveletFamily::Daubechies(1));
        }
        let digits = lower
            .strip_prefix("daub")
            .or_else(|| lower.strip_prefix("db"))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown wavelet family `{s}`")))?;
        let n: usize = digits
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("unknown wavelet family `{s}`")))?;
        if !(1..=10).contains(&n) {
            return Err(Error::UnsupportedFamily(n));
        }
        Ok(WaveletFamily::Daubechies(n))
    }
}

/// A filter pair plus the resolution range of the decomposition.
///
/// Both filters are indexed `0..2N`. The wavelet filter is the quadrature
/// mirror of the scaling filter shifted by `2N - 2`:
/// `g[n] = (-1)^n h[2N - 1 - n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveletSystem {
    pub family: WaveletFamily,
    pub filter_h: Vec<f64>,
    pub filter_g: Vec<f64>,
    pub j0: u32,
    pub jmax: u32,
}

impl WaveletSystem {
    pub fn new(family: WaveletFamily, j0: u32, jmax: u32) -> Result<Self> {
        let n = family.vanishing_moments();
        if !(1..=10).contains(&n) {
            return Err(Error::UnsupportedFamily(n));
        }
        if j0 > jmax {
            return Err(Error::BadLevels { j0, jmax });
        }
        let filter_h = filters::DAUBECHIES_TAPS[n - 1].to_vec();
        let len = filter_h.len();
        let filter_g = (0..len)
            .map(|i| if i % 2 == 0 { filter_h[len - 1 - i] } else { -filter_h[len - 1 - i] })
            .collect();
        Ok(Self { family, filter_h, filter_g, j0, jmax })
    }

    /// Shift between the stored wavelet filter and `g_n = (-1)^n h_{1-n}`.
    pub fn mirror_shift(&self) -> usize {
        self.filter_h.len() - 2
    }

    /// Coefficient layout for a grid of `grid_len` points.
    pub fn layout(&self, grid_len: usize) -> Result<CoefficientLayout> {
        CoefficientLayout::new(self.j0, self.jmax, grid_len)
    }

    /// Checks that the system can decompose curves on `grid`.
    pub fn check_grid(&self, grid: &Grid) -> Result<CoefficientLayout> {
        grid.levels()?;
        self.layout(grid.len)
    }
}

/// Convenience constructor mirroring [`WaveletSystem::new`].
pub fn build_wavelet_system(family: WaveletFamily, j0: u32, jmax: u32) -> Result<WaveletSystem> {
    WaveletSystem::new(family, j0, jmax)
}
