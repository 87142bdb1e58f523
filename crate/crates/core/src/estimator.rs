//! Lag-covariance kernel in wavelet-coefficient space.
//!
//! With centered coefficients `C` (`J × n`, column `t` = curve `t`) and
//! maximum lag `p`, the kernel matrix is
//!
//! ```text
//! D = (n-p)^-2 · C[1..n-p] · ( Σ_{k=1..p} C[k+1..n-p+k]^T C[k+1..n-p+k] ) · C[1..n-p]^T
//! ```
//!
//! Its eigenvectors are the wavelet coefficients of the eigenfunctions of
//! the lag-covariance operator, and its eigenvalues are the operator's.

use faer::{Mat, MatRef};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, SymmetricEigen};
use crate::panel::{CoefficientPanel, CurvePanel, Grid};
use crate::wavelet::{reconstruct, WaveletSystem};

/// Default maximum lag.
pub const DEFAULT_MAX_LAG: usize = 5;

/// Kernel matrix together with its spectrum.
#[derive(Debug, Clone)]
pub struct KernelEigen {
    pub d: Mat<f64>,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Column `m` is `b^{m+1}`.
    pub eigenvectors: Mat<f64>,
    pub p: usize,
    pub n_effective: usize,
}

/// Scores `η̂_{tl}` (rows = time, columns = component) and the mean
/// coefficients `ā`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScorePanel {
    pub eta: Vec<Vec<f64>>,
    pub mean_coeffs: Vec<f64>,
}

/// Column means of `raw`, and `raw` with them subtracted.
pub fn center_coefficients(raw: &CoefficientPanel) -> Result<(CoefficientPanel, Vec<f64>)> {
    let n = raw.n_curves();
    if n < 2 {
        return Err(Error::TooFewCurves { got: n, need: 2 });
    }
    let (centered, mean) = center_matrix(raw.coeffs.as_ref());
    Ok((raw.with_coeffs(centered)?, mean))
}

/// Subtracts the row-wise mean over columns (time).
pub fn center_matrix(m: MatRef<'_, f64>) -> (Mat<f64>, Vec<f64>) {
    let (rows, n) = (m.nrows(), m.ncols());
    let mean: Vec<f64> = (0..rows)
        .map(|j| (0..n).map(|t| m[(j, t)]).sum::<f64>() / n as f64)
        .collect();
    let centered = Mat::from_fn(rows, n, |j, t| m[(j, t)] - mean[j]);
    (centered, mean)
}

fn check_lag(n: usize, p: usize) -> Result<()> {
    if p == 0 || p + 1 >= n {
        return Err(Error::LagTooLarge { p, n });
    }
    Ok(())
}

/// `D` for an arbitrary coordinate matrix (rows need not be wavelet
/// coefficients; any orthonormal change of row basis is allowed).
///
/// Accumulates `A_k A_k^T` with `A_k = C_{1:m} C_{k+1:m+k}^T`, which is the
/// same product as the display above regrouped so that the work scales with
/// the number of rows rather than with `n²`.
pub fn kernel_matrix(c: MatRef<'_, f64>, p: usize) -> Result<Mat<f64>> {
    let n = c.ncols();
    check_lag(n, p)?;
    let m = n - p;
    let rows = c.nrows();
    let lead = c.subcols(0, m);
    let mut d = Mat::<f64>::zeros(rows, rows);
    for k in 1..=p {
        let a_k = lead * c.subcols(k, m).transpose();
        d += &a_k * a_k.transpose();
    }
    let scale = 1.0 / (m as f64 * m as f64);
    d *= faer::Scale(scale);
    linalg::symmetrize(&mut d);
    Ok(d)
}

/// `D` for a centered coefficient panel.
pub fn build_d(centered: &CoefficientPanel, p: usize) -> Result<Mat<f64>> {
    kernel_matrix(centered.coeffs.as_ref(), p)
}

/// Full symmetric eigen decomposition, descending, sign-normalised.
pub fn eigen_decompose(d: MatRef<'_, f64>) -> Result<SymmetricEigen> {
    linalg::symmetric_eigen(d)
}

/// Builds `D` from centered coefficients and decomposes it.
pub fn kernel_eigen(centered: &CoefficientPanel, p: usize) -> Result<KernelEigen> {
    let d = build_d(centered, p)?;
    let eig = eigen_decompose(d.as_ref())?;
    Ok(KernelEigen {
        d,
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
        p,
        n_effective: centered.n_curves() - p,
    })
}

impl KernelEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `λ_{index+1}`, or 0 past the end.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        self.eigenvalues.get(index).copied().unwrap_or(0.0)
    }

    pub fn leading_vectors(&self, d: usize) -> MatRef<'_, f64> {
        self.eigenvectors.subcols(0, d)
    }
}

/// Samples the first `d` eigenfunctions `h_m = Φ^T b^m` on `grid`.
pub fn eigenfunctions(ke: &KernelEigen, sys: &WaveletSystem, grid: &Grid, d: usize) -> Result<CurvePanel> {
    if d == 0 || d > ke.dim() {
        return Err(Error::RankRequestTooLarge { requested: d, available: ke.dim() });
    }
    let layout = sys.check_grid(grid)?;
    if layout.len() != ke.dim() {
        return Err(Error::LayoutMismatch(format!(
            "kernel has {} coefficients, system and grid give {}",
            ke.dim(),
            layout.len()
        )));
    }
    let coeffs = CoefficientPanel::new(ke.leading_vectors(d).to_owned(), layout, grid.spacing.sqrt())?;
    reconstruct(&coeffs, sys, grid)
}

/// Scores `η̂_{tl} = Σ_j c_j^t b_j^l` and fitted coefficients
/// `ā_j + Σ_{l≤d} η̂_{tl} b_j^l`.
pub fn scores_and_fit(
    raw: &CoefficientPanel,
    ke: &KernelEigen,
    d: usize,
) -> Result<(ScorePanel, CoefficientPanel)> {
    if d > ke.dim() {
        return Err(Error::RankRequestTooLarge { requested: d, available: ke.dim() });
    }
    if raw.n_coefficients() != ke.dim() {
        return Err(Error::LayoutMismatch(format!(
            "panel has {} coefficients, kernel has {}",
            raw.n_coefficients(),
            ke.dim()
        )));
    }
    let (centered, mean) = center_coefficients(raw)?;
    let basis = ke.leading_vectors(d);
    let eta = basis.transpose() * &centered.coeffs; // d × n
    let mut fitted = &basis * &eta;
    let n = raw.n_curves();
    for t in 0..n {
        for (j, &m) in mean.iter().enumerate() {
            fitted[(j, t)] += m;
        }
    }
    let scores = ScorePanel {
        eta: (0..n).map(|t| (0..d).map(|l| eta[(l, t)]).collect()).collect(),
        mean_coeffs: mean,
    };
    Ok((scores, raw.with_coeffs(fitted)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel::CoefficientLayout;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct quadruple sum
    /// `D_{jj'} = (n-p)^-2 Σ_k Σ_t Σ_s Σ_l c_j^t c_j'^s c_l^{t+k} c_l^{s+k}`.
    fn brute_force_d(c: &Mat<f64>, p: usize) -> Mat<f64> {
        let (rows, n) = (c.nrows(), c.ncols());
        let m = n - p;
        let mut d = Mat::<f64>::zeros(rows, rows);
        for j in 0..rows {
            for jp in 0..rows {
                let mut acc = 0.0;
                for k in 1..=p {
                    for t in 0..m {
                        for s in 0..m {
                            for l in 0..rows {
                                acc += c[(j, t)] * c[(jp, s)] * c[(l, t + k)] * c[(l, s + k)];
                            }
                        }
                    }
                }
                d[(j, jp)] = acc / (m * m) as f64;
            }
        }
        d
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> Mat<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Mat::from_fn(rows, cols, |_, _| rng.random::<f64>() * 2.0 - 1.0)
    }

    fn panel_from(m: Mat<f64>) -> CoefficientPanel {
        // Layout only matters for the row count here.
        let rows = m.nrows();
        let jmax = rows.trailing_zeros() - 1;
        let layout = CoefficientLayout::new(0, jmax, rows).unwrap();
        CoefficientPanel::new(m, layout, 1.0).unwrap()
    }

    #[test]
    fn centering_identical_curves_gives_zero() {
        let raw = panel_from(Mat::from_fn(4, 5, |j, _| j as f64 + 0.5));
        let (c, mean) = center_coefficients(&raw).unwrap();
        assert_eq!(linalg::max_abs(c.coeffs.as_ref()), 0.0);
        assert_eq!(mean, vec![0.5, 1.5, 2.5, 3.5]);
    }

    #[test]
    fn centering_keeps_already_centered_pair() {
        let raw = panel_from(Mat::from_fn(2, 2, |j, t| if t == 0 { j as f64 + 1.0 } else { -(j as f64) - 1.0 }));
        let (c, _) = center_coefficients(&raw).unwrap();
        assert_eq!(c.coeffs, raw.coeffs);
    }

    #[test]
    fn centered_means_vanish() {
        let raw = panel_from(random_matrix(8, 13, 4));
        let (c, _) = center_coefficients(&raw).unwrap();
        for j in 0..8 {
            let s: f64 = (0..13).map(|t| c.coeffs[(j, t)]).sum::<f64>() / 13.0;
            assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn zero_panel_gives_zero_kernel() {
        let d = kernel_matrix(Mat::<f64>::zeros(4, 10).as_ref(), 2).unwrap();
        assert_eq!(linalg::max_abs(d.as_ref()), 0.0);
    }

    #[test]
    fn scalar_case_n3_p1() {
        // J = 1, n = 3, p = 1: D = (1/4) (c1 c2 + c2 c3)^2.
        let c = Mat::from_fn(1, 3, |_, t| [0.7, -1.3, 2.1][t]);
        let d = kernel_matrix(c.as_ref(), 1).unwrap();
        let expected = brute_force_d(&c, 1)[(0, 0)];
        let closed = 0.25 * (0.7f64 * -1.3 + -1.3 * 2.1).powi(2);
        assert!((d[(0, 0)] - expected).abs() < 1e-14);
        assert!((expected - closed).abs() < 1e-14);
    }

    #[test]
    fn lag_validation() {
        let c = Mat::<f64>::zeros(2, 4);
        assert!(matches!(kernel_matrix(c.as_ref(), 3), Err(Error::LagTooLarge { p: 3, n: 4 })));
        assert!(matches!(kernel_matrix(c.as_ref(), 0), Err(Error::LagTooLarge { .. })));
        assert!(kernel_matrix(c.as_ref(), 2).is_ok());
    }

    #[test]
    fn identity_and_diagonal_spectra() {
        let e = eigen_decompose(Mat::<f64>::identity(4, 4).as_ref()).unwrap();
        assert_eq!(e.values, vec![1.0; 4]);
        let mut d = Mat::<f64>::zeros(3, 3);
        d[(0, 0)] = 3.0;
        d[(1, 1)] = 1.0;
        d[(2, 2)] = 2.0;
        let e = eigen_decompose(d.as_ref()).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn random_psd_reconstruction_residual() {
        let a = random_matrix(12, 12, 9);
        let d = &a * a.transpose();
        let mut d = d;
        linalg::symmetrize(&mut d);
        let e = eigen_decompose(d.as_ref()).unwrap();
        let lambda = Mat::from_fn(12, 12, |i, j| if i == j { e.values[i] } else { 0.0 });
        let rebuilt = &e.vectors * &lambda * e.vectors.transpose();
        let resid = linalg::max_abs((&rebuilt - &d).as_ref());
        assert!(resid < 1e-8 * linalg::max_abs(d.as_ref()));
        let gram = e.vectors.transpose() * &e.vectors;
        assert!(linalg::max_abs((&gram - Mat::<f64>::identity(12, 12)).as_ref()) < 1e-8);
        for w in e.values.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn full_and_empty_fits() {
        let raw = panel_from(random_matrix(4, 9, 2));
        let (c, _) = center_coefficients(&raw).unwrap();
        let ke = kernel_eigen(&c, 2).unwrap();
        let (_, full) = scores_and_fit(&raw, &ke, 4).unwrap();
        assert!(linalg::max_abs((&full.coeffs - &raw.coeffs).as_ref()) < 1e-12);
        let (scores, mean_only) = scores_and_fit(&raw, &ke, 0).unwrap();
        for t in 0..9 {
            for j in 0..4 {
                assert!((mean_only.coeffs[(j, t)] - scores.mean_coeffs[j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn score_columns_have_zero_mean() {
        let raw = panel_from(random_matrix(8, 20, 5));
        let (c, _) = center_coefficients(&raw).unwrap();
        let ke = kernel_eigen(&c, 3).unwrap();
        let (scores, _) = scores_and_fit(&raw, &ke, 3).unwrap();
        for l in 0..3 {
            let mean: f64 = scores.eta.iter().map(|row| row[l]).sum::<f64>() / 20.0;
            assert!(mean.abs() < 1e-10);
        }
    }

    #[test]
    fn eigenfunctions_of_unit_vector_is_scaling_function() {
        let sys = WaveletSystem::new(crate::wavelet::WaveletFamily::Daubechies(2), 2, 4).unwrap();
        let grid = Grid::unit(32).unwrap();
        let ke = KernelEigen {
            d: Mat::identity(32, 32),
            eigenvalues: vec![1.0; 32],
            eigenvectors: Mat::identity(32, 32),
            p: 1,
            n_effective: 1,
        };
        let h = eigenfunctions(&ke, &sys, &grid, 2).unwrap();
        let norm = grid.inner_product(&h.curve(0), &h.curve(0));
        assert!((norm - 1.0).abs() < 1e-12);
        let cross = grid.inner_product(&h.curve(0), &h.curve(1));
        assert!(cross.abs() < 1e-12);
        assert!(matches!(eigenfunctions(&ke, &sys, &grid, 33), Err(Error::RankRequestTooLarge { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn product_route_matches_quadruple_sum(
            rows in 1usize..=6,
            n in 3usize..=12,
            p in 1usize..=3,
            seed in any::<u64>(),
        ) {
            prop_assume!(p + 1 < n);
            let c = random_matrix(rows, n, seed);
            let fast = kernel_matrix(c.as_ref(), p).unwrap();
            let slow = brute_force_d(&c, p);
            let scale = linalg::max_abs(slow.as_ref()).max(1e-300);
            prop_assert!(linalg::max_abs((&fast - &slow).as_ref()) <= 1e-12 * scale);
        }

        #[test]
        fn eigenvalues_scale_with_fourth_power(seed in any::<u64>(), s in 0.2f64..5.0) {
            let c = random_matrix(5, 15, seed);
            let d1 = kernel_matrix(c.as_ref(), 2).unwrap();
            let mut cs = c.clone();
            cs *= faer::Scale(s);
            let d2 = kernel_matrix(cs.as_ref(), 2).unwrap();
            let e1 = eigen_decompose(d1.as_ref()).unwrap();
            let e2 = eigen_decompose(d2.as_ref()).unwrap();
            let s4 = s.powi(4);
            for (a, b) in e1.values.iter().zip(&e2.values) {
                prop_assert!((b - s4 * a).abs() <= 1e-8 * s4 * e1.values[0]);
            }
            // Leading eigenvector is invariant (sign is normalised).
            for j in 0..5 {
                prop_assert!((e1.vectors[(j, 0)] - e2.vectors[(j, 0)]).abs() < 1e-6);
            }
        }

        #[test]
        fn kernel_is_symmetric_psd(seed in any::<u64>(), n in 6usize..30) {
            let c = random_matrix(6, n, seed);
            let (c, _) = center_matrix(c.as_ref());
            let d = kernel_matrix(c.as_ref(), 3).unwrap();
            prop_assert!(linalg::asymmetry(d.as_ref()) < 1e-10);
            let e = eigen_decompose(d.as_ref()).unwrap();
            prop_assert!(*e.values.last().unwrap() > -1e-10 * e.values[0].max(0.0));
        }

        #[test]
        fn residual_energy_non_increasing_in_rank(seed in any::<u64>()) {
            let raw = panel_from(random_matrix(8, 25, seed));
            let (c, _) = center_coefficients(&raw).unwrap();
            let ke = kernel_eigen(&c, 2).unwrap();
            let mut previous = f64::INFINITY;
            for d in 0..=8 {
                let (_, fit) = scores_and_fit(&raw, &ke, d).unwrap();
                let r = (&raw.coeffs - &fit.coeffs).squared_norm_l2();
                prop_assert!(r <= previous + 1e-10);
                previous = r;
            }
        }
    }
}
