//! Kernel operator for temporally aggregated curves.
//!
//! Observed curves are weighted moving sums `𝒴_t = Σ_{s<δ} ω_s Y_{t-s}`.
//! The lag operator is estimated from the underlying `Y_t` with the weights
//! folded in: with offsets `a, b ∈ 0..δ` and `h = k + a − b`,
//!
//! ```text
//! M̂_k = Σ_{a,b} ω_a ω_b Σ_{i<m} c^i (c^{i+h})^T,     k = δ ..= p−δ+1
//! D   = m^-2 Σ_k M̂_k M̂_k^T,                          m = n − p − δ + 1
//! ```
//!
//! The same spectrum is available from the `m × m` matrix
//! `K* = m^-2 Σ_k W_k Γ_11`, where `Γ` is the Gram matrix of the centered
//! curves and `W_k(i, r) = Σ ω_a ω_b ω_a' ω_b' Γ(i+h, r+h')`.

use faer::{Mat, MatRef};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::KernelEigen;
use crate::linalg;
use crate::panel::{CoefficientPanel, CurvePanel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregationSpec {
    pub delta: usize,
    /// `ω_0, …, ω_{δ−1}`.
    pub weights: Vec<f64>,
    /// Maximum lag.
    pub p: usize,
}

impl AggregationSpec {
    pub fn new(weights: Vec<f64>, p: usize) -> Result<Self> {
        let spec = Self { delta: weights.len(), weights, p };
        spec.validate()?;
        Ok(spec)
    }

    /// No aggregation: `δ = 1`, `ω_0 = 1`.
    pub fn identity(p: usize) -> Result<Self> {
        Self::new(vec![1.0], p)
    }

    /// Three-period window with weights `(0.5, 0.3, 0.1)`.
    pub fn three_period(p: usize) -> Result<Self> {
        Self::new(vec![0.5, 0.3, 0.1], p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta == 0 || self.weights.len() != self.delta {
            return Err(Error::InvalidConfig(format!(
                "window length {} with {} weights",
                self.delta,
                self.weights.len()
            )));
        }
        if self.weights.iter().any(|w| !w.is_finite()) || self.weights.iter().all(|&w| w == 0.0) {
            return Err(Error::InvalidConfig("weights must be finite and not all zero".into()));
        }
        let min = 2 * self.delta - 1;
        if self.p < min {
            return Err(Error::LagWindowEmpty { p: self.p, min });
        }
        Ok(())
    }

    /// Lags `k` entering the estimator.
    pub fn lags(&self) -> std::ops::RangeInclusive<usize> {
        self.delta..=self.p + 1 - self.delta
    }

    /// `m = n − p − δ + 1`, or an error when fewer than two terms remain.
    pub fn effective_len(&self, n: usize) -> Result<usize> {
        self.validate()?;
        match (n + 1).checked_sub(self.p + self.delta) {
            Some(m) if m >= 2 => Ok(m),
            _ => Err(Error::LagTooLarge { p: self.p, n }),
        }
    }

    /// `(h, ω_a ω_b)` for every offset pair at lag `k`.
    fn shifts(&self, k: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let w = &self.weights;
        (0..self.delta).flat_map(move |a| (0..self.delta).map(move |b| (k + a - b, w[a] * w[b])))
    }
}

/// Weighted moving sums `𝒴_t` for `t = δ..n` (1-based); `n − δ + 1` curves.
pub fn aggregate_curves(panel: &CurvePanel, spec: &AggregationSpec) -> Result<CurvePanel> {
    spec.validate()?;
    let n = panel.n_curves();
    if n < spec.delta {
        return Err(Error::WindowTooLong { delta: spec.delta, n });
    }
    let out_n = n - spec.delta + 1;
    let values = Mat::from_fn(out_n, panel.grid.len, |t, x| {
        let last = t + spec.delta - 1;
        spec.weights.iter().enumerate().map(|(s, w)| w * panel.values[(last - s, x)]).sum()
    });
    CurvePanel::new(panel.grid, values)
}

/// Aggregate kernel matrix for any centered coordinate matrix (rows are
/// coordinates, columns time).
pub fn aggregate_kernel_matrix(c: MatRef<'_, f64>, spec: &AggregationSpec) -> Result<Mat<f64>> {
    let n = c.ncols();
    let m = spec.effective_len(n)?;
    let rows = c.nrows();
    let lead = c.subcols(0, m);
    let mut d = Mat::<f64>::zeros(rows, rows);
    for k in spec.lags() {
        let mut s_k = Mat::<f64>::zeros(rows, m);
        for (h, w) in spec.shifts(k) {
            s_k += faer::Scale(w) * c.subcols(h, m);
        }
        let a_k = lead * s_k.transpose();
        d += &a_k * a_k.transpose();
    }
    d *= faer::Scale(1.0 / (m as f64 * m as f64));
    linalg::symmetrize(&mut d);
    Ok(d)
}

pub fn build_aggregate_d(centered: &CoefficientPanel, spec: &AggregationSpec) -> Result<Mat<f64>> {
    aggregate_kernel_matrix(centered.coeffs.as_ref(), spec)
}

/// Aggregate `D` and its spectrum, in the same form as the plain kernel.
pub fn aggregate_kernel_eigen(centered: &CoefficientPanel, spec: &AggregationSpec) -> Result<KernelEigen> {
    let d = build_aggregate_d(centered, spec)?;
    let eig = linalg::symmetric_eigen(d.as_ref())?;
    Ok(KernelEigen {
        d,
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
        p: spec.p,
        n_effective: spec.effective_len(centered.n_curves())?,
    })
}

/// `K*` with its spectrum.
#[derive(Debug, Clone)]
pub struct KStar {
    /// `m × m`.
    pub matrix: Mat<f64>,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` holds `γ_j`: the eigenfunction is `Σ_i γ_ij (Y_i − Ȳ)`.
    /// Not normalised.
    pub gamma: Mat<f64>,
    /// `Γ_11`, used to orthonormalise.
    gram11: Mat<f64>,
    pub spec: AggregationSpec,
}

/// Gram matrix `⟨Y_a − Ȳ, Y_b − Ȳ⟩` by periodic trapezoid quadrature, with
/// `Ȳ` the mean over all curves.
pub fn centered_gram(panel: &CurvePanel) -> Mat<f64> {
    let n = panel.n_curves();
    let mean = panel.mean_curve();
    let z = Mat::from_fn(n, panel.grid.len, |t, x| panel.values[(t, x)] - mean[x]);
    let mut g = faer::Scale(panel.grid.spacing) * (&z * z.transpose());
    linalg::symmetrize(&mut g);
    g
}

pub fn build_kstar(panel: &CurvePanel, spec: &AggregationSpec) -> Result<KStar> {
    kstar_from_gram(centered_gram(panel).as_ref(), spec)
}

/// `K*` from an `n × n` Gram matrix of centered curves.
pub fn kstar_from_gram(gram: MatRef<'_, f64>, spec: &AggregationSpec) -> Result<KStar> {
    let n = gram.nrows();
    if gram.ncols() != n {
        return Err(Error::InvalidPanel(format!("Gram matrix is {}×{}", n, gram.ncols())));
    }
    let m = spec.effective_len(n)?;
    let mut g = Mat::<f64>::zeros(m, m);
    for k in spec.lags() {
        for (h, w) in spec.shifts(k) {
            for (h2, w2) in spec.shifts(k) {
                g += faer::Scale(w * w2) * gram.submatrix(h, h2, m, m);
            }
        }
    }
    g *= faer::Scale(1.0 / (m as f64 * m as f64));
    linalg::symmetrize(&mut g);
    let gram11 = gram.submatrix(0, 0, m, m).to_owned();
    let matrix = &g * &gram11;

    // Similar symmetric form Γ^{1/2} G Γ^{1/2}.
    let ge = linalg::symmetric_eigen(gram11.as_ref())?;
    let root = {
        let s = Mat::from_fn(m, m, |i, j| ge.vectors[(i, j)] * ge.values[j].max(0.0).sqrt());
        let mut r = &s * ge.vectors.transpose();
        linalg::symmetrize(&mut r);
        r
    };
    let mut sym = &root * &g * &root;
    linalg::symmetrize(&mut sym);
    let eig = linalg::symmetric_eigen(sym.as_ref())?;
    let gamma = &g * &root * &eig.vectors;
    Ok(KStar { matrix, eigenvalues: eig.values, gamma, gram11, spec: spec.clone() })
}

impl KStar {
    /// Orthonormal eigenfunctions `ψ̂_1..ψ̂_d` sampled on the grid of
    /// `panel` (the same curves `K*` was built from).
    ///
    /// The raw combinations are orthonormalised by modified Gram–Schmidt
    /// with one re-orthogonalisation pass.
    pub fn eigenfunctions(&self, panel: &CurvePanel, d: usize) -> Result<CurvePanel> {
        let m = self.gamma.nrows();
        if d == 0 || d > m {
            return Err(Error::RankRequestTooLarge { requested: d, available: m });
        }
        let ip = |u: &[f64], v: &[f64]| -> f64 {
            let mut acc = 0.0;
            for i in 0..m {
                for r in 0..m {
                    acc += u[i] * self.gram11[(i, r)] * v[r];
                }
            }
            acc
        };
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
        for j in 0..d {
            let mut v: Vec<f64> = (0..m).map(|i| self.gamma[(i, j)]).collect();
            let start = ip(&v, &v).max(0.0).sqrt();
            for _ in 0..2 {
                for q in &basis {
                    let c = ip(q, &v);
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= c * qi;
                    }
                }
            }
            let norm = ip(&v, &v).max(0.0).sqrt();
            if !(norm > 1e-10 * start.max(f64::MIN_POSITIVE)) {
                return Err(Error::RankRequestTooLarge { requested: d, available: j });
            }
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
        let mean = panel.mean_curve();
        let len = panel.grid.len;
        let values = Mat::from_fn(d, len, |j, x| {
            (0..m).map(|i| basis[j][i] * (panel.values[(i, x)] - mean[x])).sum()
        });
        CurvePanel::new(panel.grid, values)
    }
}

/// Closed-form spectra for independent AR(1) score processes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrueSpectrum {
    /// `α_jj^{(k)}` for `k = δ..=p−δ+1`, one row per direction.
    pub alpha: Vec<Vec<f64>>,
    /// `Σ_k (α_jj^{(k)})²` per direction, in input order.
    pub aggregate: Vec<f64>,
    /// `Σ_{k=1..p} (σ_jj^{(k)})²` per direction, in input order.
    pub plain: Vec<f64>,
}

fn descending(v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

impl TrueSpectrum {
    pub fn aggregate_sorted(&self) -> Vec<f64> {
        descending(&self.aggregate)
    }

    pub fn plain_sorted(&self) -> Vec<f64> {
        descending(&self.plain)
    }
}

pub fn true_alpha(sigma_w2: f64, ar: &[f64], spec: &AggregationSpec) -> Result<TrueSpectrum> {
    spec.validate()?;
    if let Some(&bad) = ar.iter().find(|v| !(v.abs() < 1.0)) {
        return Err(Error::NonStationaryAr(bad));
    }
    let sigma = |theta: f64, h: usize| sigma_w2 * theta.powi(h as i32) / (1.0 - theta * theta);
    let mut out = TrueSpectrum { alpha: Vec::new(), aggregate: Vec::new(), plain: Vec::new() };
    for &theta in ar {
        let alpha: Vec<f64> =
            spec.lags().map(|k| spec.shifts(k).map(|(h, w)| w * sigma(theta, h)).sum()).collect();
        out.aggregate.push(alpha.iter().map(|a| a * a).sum());
        out.plain.push((1..=spec.p).map(|k| sigma(theta, k).powi(2)).sum());
        out.alpha.push(alpha);
    }
    Ok(out)
}
