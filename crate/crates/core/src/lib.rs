//! Finite-dimension estimation for curve time series.
//!
//! Curves `Y_t = X_t + e_t` sampled on a dyadic grid are mapped to wavelet
//! coefficients, a lag-covariance kernel matrix is built in coefficient
//! space, and its spectrum is tested sequentially with one of four
//! bootstrap schemes to pick the dimension of the latent process `X_t`.
//!
//! The crate is organised as:
//!
//! - [`wavelet`]: Daubechies filters, periodic pyramid transform, thresholding.
//! - [`estimator`]: the kernel matrix `D`, its eigen decomposition, scores and fits.
//! - [`bootstrap`]: resampling schemes and sequential dimension selection.
//! - [`aggregate`]: the weighted moving-aggregate variant of the kernel.
//! - [`density`]: square-root density normalisation.
//! - [`sim`]: synthetic generators and Monte Carlo experiment runners.
//! - [`io`]: CSV ingestion, JSON formatting and atomic writes.
//! - [`cli`]: the `curvedim` command line.
//!
//! Data-parallel loops (bootstrap replicates, Monte Carlo replicates) go
//! through [`par`], which uses rayon when the `parallel` feature is enabled
//! and a plain iterator otherwise. Results never depend on the worker count.

pub mod aggregate;
pub mod bootstrap;
pub mod cli;
pub mod density;
pub mod error;
pub mod estimator;
pub mod io;
pub mod linalg;
pub mod panel;
pub mod par;
pub mod rng;
pub mod sim;
pub mod wavelet;

pub use error::{Error, Result};
pub use panel::{CoefficientLayout, CoefficientPanel, CurvePanel, Grid};
pub use wavelet::{ThresholdRule, WaveletFamily, WaveletSystem};
