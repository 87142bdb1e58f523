//! Bootstrap tests of `H0: λ_{d0+1} = 0` and sequential dimension selection.
//!
//! All four schemes resample directly in coefficient space. Under the null
//! model with `d0` components, curve `t` is fitted by
//! `ã_t = ā + Σ_{l≤d0} η̂_{tl} b^l` and leaves residual `ε̂_t = a_t − ã_t`.
//! A replicate draws donor indices `t*` with replacement and forms
//!
//! ```text
//! a_t^b = a_{t*} + Σ_{l≤d0} (η̂_{tl} − η̂_{t*l}) b^l   (= ã_t + ε̂_{t*})
//! ```
//!
//! then recomputes the `(d0+1)`-th eigenvalue of `D`. The p-value is
//! `#{λ̂ < λ^b} / (B + 1)`.
//!
//! Each replicate draws from its own stream keyed by `(seed, d0, r)`, so
//! results do not depend on how replicates are scheduled.

use std::fmt;
use std::str::FromStr;

use faer::{Mat, MatRef};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{center_coefficients, center_matrix, kernel_eigen, kernel_matrix, KernelEigen};
use crate::linalg;
use crate::panel::{CoefficientLayout, CoefficientPanel};
use crate::rng::{self, Domain};
use crate::wavelet::{hard_threshold, hard_threshold_vector, ThresholdRule};

/// Eigenvalues at or below this fraction of `λ̂_1` are treated as zero.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-10;

/// Singular-value cut-off used when restricting replicates to the span of
/// the data.
const SPAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BootstrapMethod {
    /// Residual bootstrap on the raw coefficients.
    Ordinary,
    /// Hard-threshold every curve's coefficients first, then `Ordinary`.
    ThresholdBefore,
    /// Null model built from thresholded `ā` and `b^l`.
    ThresholdedResidual,
    /// Residual curves whose detail coefficients are resampled within level.
    Wavestrap,
}

impl BootstrapMethod {
    pub const ALL: [BootstrapMethod; 4] = [
        BootstrapMethod::Ordinary,
        BootstrapMethod::ThresholdBefore,
        BootstrapMethod::ThresholdedResidual,
        BootstrapMethod::Wavestrap,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BootstrapMethod::Ordinary => "ordinary",
            BootstrapMethod::ThresholdBefore => "threshold_before",
            BootstrapMethod::ThresholdedResidual => "thresholded_residual",
            BootstrapMethod::Wavestrap => "wavestrap",
        }
    }
}

impl fmt::Display for BootstrapMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BootstrapMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        BootstrapMethod::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| Error::InvalidMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub method: BootstrapMethod,
    /// Number of replicates `B`.
    pub replicates: usize,
    pub alpha: f64,
    pub seed: u64,
    /// Cap on the selected dimension.
    pub d_max: usize,
    pub threshold: ThresholdRule,
    /// Form replicates as `ã_t + ε̂_{t*}` instead of the coefficient
    /// identity in the module docs. The two agree up to rounding.
    pub literal_prose: bool,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            method: BootstrapMethod::Ordinary,
            replicates: 100,
            alpha: 0.05,
            seed: 0,
            d_max: 10,
            threshold: ThresholdRule::Universal,
            literal_prose: false,
        }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates < 19 {
            return Err(Error::InvalidConfig(format!("B = {} must be at least 19", self.replicates)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!("alpha = {} must lie in (0, 1)", self.alpha)));
        }
        if self.d_max == 0 {
            return Err(Error::InvalidConfig("d_max must be at least 1".into()));
        }
        if let ThresholdRule::Fixed(v) = self.threshold {
            if v.is_nan() || v < 0.0 {
                return Err(Error::InvalidConfig(format!("threshold {v} must be non-negative")));
            }
        }
        Ok(())
    }
}

/// Outcome of one test of `λ_{d0+1} = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PValue {
    pub d0: usize,
    pub p_value: f64,
    /// `#{λ̂ < λ^b}`.
    pub exceedances: usize,
    pub replicates: usize,
    /// `λ̂_{d0+1}`.
    pub statistic: f64,
    /// Statistic and every replicate were zero; reported as `p = 1`.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub selected_d: usize,
    pub pvalues: Vec<PValue>,
    pub eigenvalues: Vec<f64>,
    /// Every test up to `d_max` rejected.
    pub capped: bool,
    pub method: BootstrapMethod,
    pub seed: u64,
    pub p: usize,
    pub config: BootstrapConfig,
}

/// Counts strict exceedances after flooring near-zero eigenvalues.
///
/// Returns `(p, exceedances, degenerate)`.
pub fn pvalue_from_statistics(statistic: f64, replicates: &[f64], floor: f64) -> (f64, usize, bool) {
    let clamp = |v: f64| if v <= floor { 0.0 } else { v };
    let stat = clamp(statistic);
    let boot: Vec<f64> = replicates.iter().map(|&v| clamp(v)).collect();
    if stat == 0.0 && boot.iter().all(|&v| v == 0.0) {
        return (1.0, 0, true);
    }
    let count = boot.iter().filter(|&&v| stat < v).count();
    (count as f64 / (replicates.len() + 1) as f64, count, false)
}

/// Coefficients the test statistic is computed from: the raw panel, or its
/// hard-thresholded version under [`BootstrapMethod::ThresholdBefore`].
pub fn analysis_coefficients(raw: &CoefficientPanel, cfg: &BootstrapConfig) -> CoefficientPanel {
    match cfg.method {
        BootstrapMethod::ThresholdBefore => hard_threshold(raw, cfg.threshold),
        _ => raw.clone(),
    }
}

/// Resamples each detail level of `residual` with replacement; the
/// approximation block is copied unchanged.
pub fn wavestrap_residual<R: Rng + ?Sized>(layout: &CoefficientLayout, residual: &[f64], rng: &mut R) -> Vec<f64> {
    let mut out = residual.to_vec();
    for level in layout.levels() {
        let rows = layout.detail_rows(level);
        let (start, len) = (rows.start, rows.len());
        for i in rows {
            out[i] = residual[start + rng.random_range(0..len)];
        }
    }
    out
}

/// The null model for one `d0`, expressed in the coordinates replicates are
/// generated in.
struct NullModel {
    /// Orthonormal basis replicates live in, when smaller than `J`.
    projection: Option<Mat<f64>>,
    raw: Mat<f64>,
    fitted: Mat<f64>,
    residual: Mat<f64>,
    /// `d0 × n`.
    eta: Mat<f64>,
    /// `coords × d0`; thresholded under `ThresholdedResidual`.
    basis: Mat<f64>,
    layout: CoefficientLayout,
    p: usize,
    d0: usize,
}

impl NullModel {
    fn new(raw: &CoefficientPanel, ke: &KernelEigen, d0: usize, cfg: &BootstrapConfig) -> Result<Self> {
        let (centered, mean) = center_coefficients(raw)?;
        let n = raw.n_curves();
        let big_j = raw.n_coefficients();
        let b = ke.leading_vectors(d0);
        let eta = b.transpose() * &centered.coeffs;

        let (model_mean, model_basis) = match cfg.method {
            BootstrapMethod::ThresholdedResidual => {
                let mut m = mean.clone();
                hard_threshold_vector(&raw.layout, &mut m, cfg.threshold);
                let mut basis = b.to_owned();
                for l in 0..d0 {
                    let mut col: Vec<f64> = (0..big_j).map(|j| basis[(j, l)]).collect();
                    hard_threshold_vector(&raw.layout, &mut col, cfg.threshold);
                    for (j, v) in col.into_iter().enumerate() {
                        basis[(j, l)] = v;
                    }
                }
                (m, basis)
            }
            _ => (mean, b.to_owned()),
        };

        let mut fitted = &model_basis * &eta;
        for t in 0..n {
            for (j, &m) in model_mean.iter().enumerate() {
                fitted[(j, t)] += m;
            }
        }
        let residual = &raw.coeffs - &fitted;

        // Every non-wavestrap replicate is a linear combination of the raw
        // columns, the model basis and the model mean, so D^b can be formed
        // in that (often much smaller) span without changing its spectrum.
        let projection = if cfg.method == BootstrapMethod::Wavestrap {
            None
        } else {
            let gen = Mat::from_fn(big_j, n + d0 + 1, |j, c| {
                if c < n {
                    raw.coeffs[(j, c)]
                } else if c < n + d0 {
                    model_basis[(j, c - n)]
                } else {
                    model_mean[j]
                }
            });
            linalg::span_basis(gen.as_ref(), SPAN_TOL)?
        };
        let project = |m: MatRef<'_, f64>| -> Mat<f64> {
            match &projection {
                Some(q) => q.transpose() * m,
                None => m.to_owned(),
            }
        };
        Ok(Self {
            raw: project(raw.coeffs.as_ref()),
            fitted: project(fitted.as_ref()),
            residual: project(residual.as_ref()),
            basis: project(model_basis.as_ref()),
            eta,
            projection,
            layout: raw.layout,
            p: ke.p,
            d0,
        })
    }

    fn coords(&self) -> usize {
        self.raw.nrows()
    }

    fn sample(&self, cfg: &BootstrapConfig, replicate: usize) -> Mat<f64> {
        let n = self.raw.ncols();
        let rows = self.coords();
        let mut rng = rng::stream(cfg.seed, Domain::Bootstrap, self.d0 as u32, replicate as u32);
        let donors: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let mut x = Mat::<f64>::zeros(rows, n);
        match cfg.method {
            BootstrapMethod::Wavestrap => {
                debug_assert!(self.projection.is_none());
                for (t, &src) in donors.iter().enumerate() {
                    let resid: Vec<f64> = (0..rows).map(|j| self.residual[(j, src)]).collect();
                    let drawn = wavestrap_residual(&self.layout, &resid, &mut rng);
                    for j in 0..rows {
                        x[(j, t)] = self.fitted[(j, t)] + drawn[j];
                    }
                }
            }
            _ if cfg.literal_prose => {
                for (t, &src) in donors.iter().enumerate() {
                    for j in 0..rows {
                        x[(j, t)] = self.fitted[(j, t)] + self.residual[(j, src)];
                    }
                }
            }
            _ => {
                for (t, &src) in donors.iter().enumerate() {
                    for j in 0..rows {
                        let mut v = self.raw[(j, src)];
                        for l in 0..self.d0 {
                            v += (self.eta[(l, t)] - self.eta[(l, src)]) * self.basis[(j, l)];
                        }
                        x[(j, t)] = v;
                    }
                }
            }
        }
        x
    }

    fn replicate_statistic(&self, cfg: &BootstrapConfig, replicate: usize) -> Result<f64> {
        let x = self.sample(cfg, replicate);
        let (centered, _) = center_matrix(x.as_ref());
        let d = kernel_matrix(centered.as_ref(), self.p)?;
        let values = linalg::symmetric_eigenvalues(d.as_ref())?;
        Ok(values.get(self.d0).copied().unwrap_or(0.0))
    }
}

/// Bootstrap p-value for `H0: λ_{d0+1} = 0`.
///
/// `raw` are the analysis coefficients (see [`analysis_coefficients`]) and
/// `ke` must be the kernel of their centered version.
pub fn bootstrap_pvalue(raw: &CoefficientPanel, ke: &KernelEigen, d0: usize, cfg: &BootstrapConfig) -> Result<PValue> {
    cfg.validate()?;
    if d0 >= ke.dim() {
        return Err(Error::RankRequestTooLarge { requested: d0 + 1, available: ke.dim() });
    }
    let model = NullModel::new(raw, ke, d0, cfg)?;
    let boot = crate::par::try_map_indexed(cfg.replicates, |r| model.replicate_statistic(cfg, r))?;
    let statistic = ke.eigenvalue(d0);
    let floor = zero_floor(raw, ke);
    let (p_value, exceedances, degenerate) = pvalue_from_statistics(statistic, &boot, floor);
    Ok(PValue { d0, p_value, exceedances, replicates: cfg.replicates, statistic, degenerate })
}

/// Eigenvalue floor: relative to `λ̂_1`, but never below the size of
/// rounding noise in a kernel built from data of this magnitude.
fn zero_floor(raw: &CoefficientPanel, ke: &KernelEigen) -> f64 {
    let scale = 1e3 * f64::EPSILON * linalg::max_abs(raw.coeffs.as_ref());
    let noise = scale.powi(4) * (raw.n_coefficients() * ke.p) as f64;
    (ZERO_EIGENVALUE_TOL * ke.eigenvalue(0).max(0.0)).max(noise)
}

/// Analysis coefficients, their kernel, and the selection report.
#[derive(Debug, Clone)]
pub struct DimensionAnalysis {
    pub coefficients: CoefficientPanel,
    pub kernel: KernelEigen,
    pub report: DimensionReport,
}

/// Runs the sequential test and keeps the intermediate kernel.
pub fn analyze(raw: &CoefficientPanel, cfg: &BootstrapConfig, p: usize) -> Result<DimensionAnalysis> {
    cfg.validate()?;
    let work = analysis_coefficients(raw, cfg);
    let (centered, _) = center_coefficients(&work)?;
    let kernel = kernel_eigen(&centered, p)?;
    let cap = cfg.d_max.min(kernel.dim());
    let mut pvalues = Vec::new();
    let mut selected = None;
    for d0 in 0..cap {
        let pv = bootstrap_pvalue(&work, &kernel, d0, cfg)?;
        pvalues.push(pv);
        if pv.p_value > cfg.alpha {
            selected = Some(d0);
            break;
        }
    }
    let report = DimensionReport {
        selected_d: selected.unwrap_or(cap),
        pvalues,
        eigenvalues: kernel.eigenvalues.clone(),
        capped: selected.is_none(),
        method: cfg.method,
        seed: cfg.seed,
        p,
        config: *cfg,
    };
    Ok(DimensionAnalysis { coefficients: work, kernel, report })
}

/// Tests `d0 = 0, 1, …` and stops at the first non-rejection.
pub fn select_dimension(raw: &CoefficientPanel, cfg: &BootstrapConfig, p: usize) -> Result<DimensionReport> {
    analyze(raw, cfg, p).map(|a| a.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::scores_and_fit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn layout() -> CoefficientLayout {
        CoefficientLayout::new(1, 3, 16).unwrap()
    }

    /// AR-driven scores on two fixed directions plus white noise.
    fn panel(n: usize, noise: f64, seed: u64) -> CoefficientPanel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = layout().len();
        let mut xi = [0.0f64; 2];
        let coeffs = Mat::from_fn(j, n, |_, _| 0.0);
        let mut coeffs = coeffs;
        for t in 0..n {
            xi[0] = -0.65 * xi[0] + rng.random::<f64>() * 2.0 - 1.0;
            xi[1] = 0.4 * xi[1] + rng.random::<f64>() * 2.0 - 1.0;
            for r in 0..j {
                let dir0 = if r == 0 { 1.0 } else { 0.0 };
                let dir1 = if r == 3 { 1.0 } else { 0.0 };
                coeffs[(r, t)] = 2.0 * xi[0] * dir0 + xi[1] * dir1 + noise * (rng.random::<f64>() - 0.5);
            }
        }
        CoefficientPanel::new(coeffs, layout(), 1.0).unwrap()
    }

    fn cfg(method: BootstrapMethod) -> BootstrapConfig {
        BootstrapConfig { method, replicates: 39, seed: 17, ..Default::default() }
    }

    #[test]
    fn pvalue_formula() {
        let boot: Vec<f64> = (0..99).map(|i| if i < 4 { 2.0 } else { 0.5 }).collect();
        let (p, count, degenerate) = pvalue_from_statistics(1.0, &boot, 0.0);
        assert_eq!(count, 4);
        assert!((p - 0.04).abs() < 1e-15);
        assert!(!degenerate);
        // Ties do not count.
        let (_, count, _) = pvalue_from_statistics(0.5, &boot, 0.0);
        assert_eq!(count, 4);
    }

    #[test]
    fn degenerate_null_gives_one() {
        let (p, count, degenerate) = pvalue_from_statistics(1e-30, &[0.0, 1e-31, 0.0], 1e-20);
        assert_eq!((p, count, degenerate), (1.0, 0, true));
    }

    #[test]
    fn method_parsing() {
        assert_eq!("ordinary".parse::<BootstrapMethod>().unwrap(), BootstrapMethod::Ordinary);
        assert_eq!("threshold-before".parse::<BootstrapMethod>().unwrap(), BootstrapMethod::ThresholdBefore);
        assert_eq!("Wavestrap".parse::<BootstrapMethod>().unwrap(), BootstrapMethod::Wavestrap);
        assert!(matches!("jackknife".parse::<BootstrapMethod>(), Err(Error::InvalidMethod(_))));
    }

    #[test]
    fn config_validation() {
        let ok = BootstrapConfig::default();
        assert!(ok.validate().is_ok());
        assert!(BootstrapConfig { replicates: 18, ..ok }.validate().is_err());
        assert!(BootstrapConfig { alpha: 1.0, ..ok }.validate().is_err());
        assert!(BootstrapConfig { alpha: 0.0, ..ok }.validate().is_err());
        assert!(BootstrapConfig { d_max: 0, ..ok }.validate().is_err());
    }

    #[test]
    fn exact_low_rank_data_is_not_rejected() {
        // Curves exactly in a one-dimensional affine span: residuals vanish.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let j = layout().len();
        let mut s = 0.0f64;
        let coeffs = Mat::from_fn(j, 40, |r, _| {
            if r == 0 {
                s = 0.7 * s + rng.random::<f64>() - 0.5;
            }
            if r == 2 { s } else { 0.25 }
        });
        let raw = CoefficientPanel::new(coeffs, layout(), 1.0).unwrap();
        let (c, _) = center_coefficients(&raw).unwrap();
        let ke = kernel_eigen(&c, 2).unwrap();
        let pv = bootstrap_pvalue(&raw, &ke, 1, &cfg(BootstrapMethod::Ordinary)).unwrap();
        assert!(pv.degenerate);
        assert_eq!(pv.p_value, 1.0);
        let report = select_dimension(&raw, &cfg(BootstrapMethod::Ordinary), 2).unwrap();
        assert_eq!(report.selected_d, 1);
    }

    #[test]
    fn zero_variance_selects_zero() {
        let raw = CoefficientPanel::new(Mat::from_fn(16, 30, |j, _| j as f64), layout(), 1.0).unwrap();
        let report = select_dimension(&raw, &cfg(BootstrapMethod::Ordinary), 3).unwrap();
        assert_eq!(report.selected_d, 0);
        assert_eq!(report.pvalues.len(), 1);
        assert_eq!(report.pvalues[0].p_value, 1.0);
    }

    #[test]
    fn prose_and_coefficient_forms_agree() {
        let raw = panel(60, 0.3, 5);
        for method in [BootstrapMethod::Ordinary, BootstrapMethod::ThresholdedResidual] {
            let c = cfg(method);
            let (centered, _) = center_coefficients(&raw).unwrap();
            let ke = kernel_eigen(&centered, 3).unwrap();
            let a = NullModel::new(&raw, &ke, 2, &c).unwrap();
            let prose = BootstrapConfig { literal_prose: true, ..c };
            for r in 0..5 {
                let x = a.sample(&c, r);
                let y = a.sample(&prose, r);
                assert!(linalg::max_abs((&x - &y).as_ref()) < 1e-10);
            }
        }
    }

    #[test]
    fn ordinary_and_thresholded_residual_coincide_at_zero_threshold() {
        let raw = panel(50, 0.5, 8);
        let (c, _) = center_coefficients(&raw).unwrap();
        let ke = kernel_eigen(&c, 3).unwrap();
        let base = BootstrapConfig { threshold: ThresholdRule::Fixed(0.0), ..cfg(BootstrapMethod::Ordinary) };
        let thr = BootstrapConfig { method: BootstrapMethod::ThresholdedResidual, ..base };
        for d0 in 0..3 {
            let a = bootstrap_pvalue(&raw, &ke, d0, &base).unwrap();
            let b = bootstrap_pvalue(&raw, &ke, d0, &thr).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn reduced_coordinates_match_full_computation() {
        // Data of rank 3 in J = 16: replicates computed in the span must have
        // the same eigenvalues as in full coordinates.
        let raw = {
            let p = panel(45, 0.0, 2);
            let mut m = p.coeffs.clone();
            for t in 0..45 {
                m[(7, t)] = 0.3 * m[(0, t)] - m[(3, t)] + 0.1 * (t as f64).sin();
            }
            p.with_coeffs(m).unwrap()
        };
        let c = cfg(BootstrapMethod::Ordinary);
        let (centered, _) = center_coefficients(&raw).unwrap();
        let ke = kernel_eigen(&centered, 2).unwrap();
        let model = NullModel::new(&raw, &ke, 1, &c).unwrap();
        assert!(model.coords() < 16);
        let q = model.projection.as_ref().unwrap();
        for r in 0..4 {
            let reduced = model.sample(&c, r);
            let full = q * &reduced;
            let lr = {
                let (x, _) = center_matrix(reduced.as_ref());
                linalg::symmetric_eigenvalues(kernel_matrix(x.as_ref(), 2).unwrap().as_ref()).unwrap()
            };
            let lf = {
                let (x, _) = center_matrix(full.as_ref());
                linalg::symmetric_eigenvalues(kernel_matrix(x.as_ref(), 2).unwrap().as_ref()).unwrap()
            };
            for k in 0..lr.len() {
                assert!((lr[k] - lf[k]).abs() < 1e-10 * lf[0]);
            }
        }
    }

    #[test]
    fn wavestrap_enlarges_the_residual_pool() {
        let layout = layout();
        let residual: Vec<f64> = (0..layout.len()).map(|i| i as f64).collect();
        let mut rng1 = rng::stream(1, Domain::Bootstrap, 0, 0);
        let mut rng2 = rng::stream(1, Domain::Bootstrap, 0, 1);
        let a = wavestrap_residual(&layout, &residual, &mut rng1);
        let b = wavestrap_residual(&layout, &residual, &mut rng2);
        // Two distinct draws from one residual: more than n possible curves.
        assert_ne!(a, b);
        assert!(a != residual || b != residual);
        assert_eq!(&a[..2], &residual[..2]);
        for level in layout.levels() {
            let rows = layout.detail_rows(level);
            for i in rows.clone() {
                assert!(rows.contains(&(a[i] as usize)));
            }
        }
    }

    #[test]
    fn pvalues_lie_on_the_lattice() {
        let raw = panel(40, 0.4, 11);
        for method in BootstrapMethod::ALL {
            let c = cfg(method);
            let work = analysis_coefficients(&raw, &c);
            let (centered, _) = center_coefficients(&work).unwrap();
            let ke = kernel_eigen(&centered, 3).unwrap();
            let pv = bootstrap_pvalue(&work, &ke, 1, &c).unwrap();
            let scaled = pv.p_value * (c.replicates + 1) as f64;
            assert!((scaled - scaled.round()).abs() < 1e-9 || pv.degenerate);
            assert!(pv.exceedances <= c.replicates);
        }
    }

    #[test]
    fn selection_is_deterministic_across_workers() {
        let raw = panel(50, 0.4, 21);
        let c = cfg(BootstrapMethod::Wavestrap);
        let a = crate::par::with_workers(1, || select_dimension(&raw, &c, 3).unwrap());
        let b = crate::par::with_workers(4, || select_dimension(&raw, &c, 3).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn strong_two_dimensional_signal_is_detected() {
        let raw = panel(300, 0.05, 1);
        let report = select_dimension(&raw, &cfg(BootstrapMethod::Ordinary), 3).unwrap();
        assert!(report.pvalues[0].p_value <= 0.05);
        assert!(report.pvalues[1].p_value <= 0.05);
        assert_eq!(report.selected_d, 2);
        let (centered, _) = center_coefficients(&raw).unwrap();
        let ke = kernel_eigen(&centered, 3).unwrap();
        assert!(scores_and_fit(&raw, &ke, 2).is_ok());
    }

    #[test]
    fn rank_request_past_dimension_fails() {
        let raw = panel(30, 0.4, 1);
        let (centered, _) = center_coefficients(&raw).unwrap();
        let ke = kernel_eigen(&centered, 2).unwrap();
        assert!(matches!(
            bootstrap_pvalue(&raw, &ke, 16, &cfg(BootstrapMethod::Ordinary)),
            Err(Error::RankRequestTooLarge { .. })
        ));
    }
}
