//! Synthetic curve time series and Monte Carlo runners.
//!
//! Curves on `[0, 1)` are
//!
//! ```text
//! Y_t(x) = Σ_{l≤d} ξ_tl √2 cos(πlx) + Σ_{i≤d} 2^{1−i} Z_ti √2 sin(πix)
//! ```
//!
//! with independent AR(1) scores `ξ_tl = ϑ_l ξ_{t−1,l} + w_tl`,
//! `ϑ_l = (−1)^l (0.9 − 0.5 l/d)`, `Var w = σ_w²`, started from the
//! stationary law, and i.i.d. standard normal `Z_ti`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use faer::Mat;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::aggregate::{aggregate_kernel_eigen, true_alpha, AggregationSpec};
use crate::bootstrap::{select_dimension, BootstrapConfig, BootstrapMethod};
use crate::error::{Error, Result};
use crate::estimator::{center_coefficients, kernel_eigen, KernelEigen};
use crate::panel::{CoefficientPanel, CurvePanel, Grid};
use crate::par;
use crate::rng::{self, Domain};
use crate::wavelet::{build_wavelet_system, decompose, WaveletFamily};

/// Number of leading eigenvalues averaged in the eigenvalue table.
pub const TABLE2_EIGENVALUES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimDesign {
    pub d: usize,
    pub n: usize,
    pub grid_len: usize,
    pub sigma_w2: f64,
    pub p: usize,
    pub seed: u64,
    pub replicates: usize,
    pub aggregation: Option<AggregationSpec>,
    /// Drop the noise term.
    pub noiseless: bool,
    pub family: WaveletFamily,
    pub j0: u32,
    pub jmax: u32,
}

impl Default for SimDesign {
    fn default() -> Self {
        Self {
            d: 2,
            n: 100,
            grid_len: 256,
            sigma_w2: 1.5,
            p: 5,
            seed: 0,
            replicates: 50,
            aggregation: None,
            noiseless: false,
            family: WaveletFamily::Daubechies(4),
            j0: 5,
            jmax: 7,
        }
    }
}

impl SimDesign {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidConfig("d must be at least 1".into()));
        }
        if !self.grid_len.is_power_of_two() {
            return Err(Error::GridNotDyadic(self.grid_len));
        }
        if !(self.sigma_w2 > 0.0 && self.sigma_w2.is_finite()) {
            return Err(Error::InvalidConfig(format!("sigma_w2 = {} must be positive", self.sigma_w2)));
        }
        let window = match &self.aggregation {
            Some(spec) => {
                spec.validate()?;
                if spec.p != self.p {
                    return Err(Error::InvalidConfig(format!(
                        "aggregation lag {} differs from p = {}",
                        spec.p, self.p
                    )));
                }
                spec.delta - 1
            }
            None => 0,
        };
        if self.n < self.p + window + 2 {
            return Err(Error::TooFewCurves { got: self.n, need: self.p + window + 2 });
        }
        Ok(())
    }

    fn with(&self, d: usize, n: usize) -> Self {
        Self { d, n, ..self.clone() }
    }

    /// Seed of the `index`-th Monte Carlo replicate's downstream work.
    fn replicate_seed(&self, index: usize) -> u64 {
        rng::derive_seed(self.seed, Domain::Experiment, index as u64)
    }
}

/// `ϑ_l = (−1)^l (0.9 − 0.5 l/d)` for `l = 1..=d`.
pub fn ar_coefficients(d: usize) -> Vec<f64> {
    (1..=d)
        .map(|l| {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            sign * (0.9 - 0.5 * l as f64 / d as f64)
        })
        .collect()
}

/// AR scores `ξ_tl` (rows = time) and noise draws `Z_ti` of one replicate.
pub fn generate_scores(design: &SimDesign, replicate: usize) -> (Mat<f64>, Mat<f64>) {
    let (d, n) = (design.d, design.n);
    let theta = ar_coefficients(d);
    let mut rng = rng::stream(design.seed, Domain::Simulation, replicate as u32, 0);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    let sd = design.sigma_w2.sqrt();
    let mut xi = Mat::<f64>::zeros(n, d);
    let mut z = Mat::<f64>::zeros(n, d);
    for t in 0..n {
        for l in 0..d {
            xi[(t, l)] = if t == 0 {
                draw() * sd / (1.0 - theta[l] * theta[l]).sqrt()
            } else {
                theta[l] * xi[(t - 1, l)] + sd * draw()
            };
        }
        for i in 0..d {
            z[(t, i)] = draw();
        }
    }
    (xi, z)
}

/// One replicate's panel on the unit grid.
pub fn generate_panel(design: &SimDesign, replicate: usize) -> Result<CurvePanel> {
    design.validate()?;
    let grid = Grid::unit(design.grid_len)?;
    let d = design.d;
    let (xi, z) = generate_scores(design, replicate);
    let x = grid.points();
    let cos = Mat::from_fn(d, grid.len, |l, i| SQRT_2 * (PI * (l + 1) as f64 * x[i]).cos());
    let sin = Mat::from_fn(d, grid.len, |l, i| SQRT_2 * (PI * (l + 1) as f64 * x[i]).sin() / f64::powi(2.0, l as i32));
    let mut values = &xi * &cos;
    if !design.noiseless {
        values += &z * &sin;
    }
    CurvePanel::new(grid, values)
}

fn coefficients(design: &SimDesign, replicate: usize) -> Result<CoefficientPanel> {
    let panel = generate_panel(design, replicate)?;
    let sys = build_wavelet_system(design.family, design.j0, design.jmax)?;
    decompose(&panel, &sys)
}

/// Plain or aggregate kernel of one replicate, as the design prescribes.
pub fn replicate_kernel(design: &SimDesign, replicate: usize) -> Result<KernelEigen> {
    let (centered, _) = center_coefficients(&coefficients(design, replicate)?)?;
    match &design.aggregation {
        Some(spec) => aggregate_kernel_eigen(&centered, spec),
        None => kernel_eigen(&centered, design.p),
    }
}

/// True eigenvalues of the design's operator, descending.
pub fn true_eigenvalues(design: &SimDesign) -> Result<Vec<f64>> {
    let theta = ar_coefficients(design.d);
    match &design.aggregation {
        Some(spec) => Ok(true_alpha(design.sigma_w2, &theta, spec)?.aggregate_sorted()),
        None => Ok(true_alpha(design.sigma_w2, &theta, &AggregationSpec::identity(design.p)?)?.plain_sorted()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Cell {
    pub d: usize,
    pub n: usize,
    pub method: BootstrapMethod,
    pub replicates: usize,
    /// Selected dimension → count.
    pub histogram: BTreeMap<usize, usize>,
}

impl Table1Cell {
    /// Fraction of replicates selecting `d_hat`.
    pub fn rate(&self, d_hat: usize) -> f64 {
        self.histogram.get(&d_hat).copied().unwrap_or(0) as f64 / self.replicates as f64
    }
}

/// Selection histograms for every `(design, method)` pair. All methods see
/// the same simulated panels.
pub fn run_table1(designs: &[SimDesign], methods: &[BootstrapMethod], base: &BootstrapConfig) -> Result<Vec<Table1Cell>> {
    base.validate()?;
    let mut cells = Vec::new();
    for design in designs {
        design.validate()?;
        if design.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be at least 1".into()));
        }
        let panels = par::try_map_indexed(design.replicates, |r| coefficients(design, r))?;
        for &method in methods {
            let selected = par::try_map_indexed(design.replicates, |r| {
                let cfg = BootstrapConfig { method, seed: design.replicate_seed(r), ..*base };
                select_dimension(&panels[r], &cfg, design.p).map(|rep| rep.selected_d)
            })?;
            let mut histogram = BTreeMap::new();
            for s in selected {
                *histogram.entry(s).or_insert(0) += 1;
            }
            cells.push(Table1Cell { d: design.d, n: design.n, method, replicates: design.replicates, histogram });
        }
    }
    Ok(cells)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Estimate,
    True,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub d: usize,
    /// `None` on true-value rows.
    pub n: Option<usize>,
    pub aggregated: bool,
    pub kind: RowKind,
    pub values: Vec<f64>,
}

fn padded(values: &[f64], len: usize) -> Vec<f64> {
    (0..len).map(|i| values.get(i).copied().unwrap_or(0.0)).collect()
}

/// Average leading eigenvalues per design plus one true row per distinct
/// `(d, aggregated)` pair.
pub fn run_table2(designs: &[SimDesign]) -> Result<Vec<Table2Row>> {
    let mut rows = Vec::new();
    let mut seen = Vec::new();
    for design in designs {
        design.validate()?;
        if design.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be at least 1".into()));
        }
        let aggregated = design.aggregation.is_some();
        if !seen.contains(&(design.d, aggregated)) {
            seen.push((design.d, aggregated));
            rows.push(Table2Row {
                d: design.d,
                n: None,
                aggregated,
                kind: RowKind::True,
                values: padded(&true_eigenvalues(design)?, TABLE2_EIGENVALUES),
            });
        }
        let spectra = par::try_map_indexed(design.replicates, |r| {
            replicate_kernel(design, r).map(|ke| padded(&ke.eigenvalues, TABLE2_EIGENVALUES))
        })?;
        let mut mean = vec![0.0; TABLE2_EIGENVALUES];
        for s in &spectra {
            for (m, v) in mean.iter_mut().zip(s) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= design.replicates as f64);
        rows.push(Table2Row { d: design.d, n: Some(design.n), aggregated, kind: RowKind::Estimate, values: mean });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    /// Mean `|θ̂_j − θ_j|` for `j = 1..=d`.
    pub mean_abs_error: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub d: usize,
    pub aggregated: bool,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `ln error_1` on `ln n`.
    pub slope: f64,
    pub reference_slope: f64,
}

/// Least-squares slope of `y` on `x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Mean absolute eigenvalue error of `base` at each sample size.
pub fn run_convergence(base: &SimDesign, ns: &[usize]) -> Result<ConvergenceTable> {
    if ns.len() < 2 {
        return Err(Error::InvalidConfig("convergence needs at least two sample sizes".into()));
    }
    if base.replicates == 0 {
        return Err(Error::InvalidConfig("replicates must be at least 1".into()));
    }
    let truth = true_eigenvalues(base)?;
    let mut rows = Vec::new();
    for &n in ns {
        let design = base.with(base.d, n);
        design.validate()?;
        let errors = par::try_map_indexed(design.replicates, |r| {
            replicate_kernel(&design, r)
                .map(|ke| (0..design.d).map(|j| (ke.eigenvalue(j) - truth[j]).abs()).collect::<Vec<f64>>())
        })?;
        let mean_abs_error = (0..design.d)
            .map(|j| errors.iter().map(|e| e[j]).sum::<f64>() / design.replicates as f64)
            .collect();
        rows.push(ConvergenceRow { n, mean_abs_error });
    }
    let x: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.mean_abs_error[0]).collect();
    Ok(ConvergenceTable {
        d: base.d,
        aggregated: base.aggregation.is_some(),
        rows,
        slope: loglog_slope(&x, &y),
        reference_slope: -0.5,
    })
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e)))
}

/// One line per `(d, n, method, d̂)` with the count and rate.
pub fn table1_csv(cells: &[Table1Cell]) -> Result<String> {
    csv_string(|w| {
        w.write_record(["d", "n", "method", "replicates", "d_hat", "count", "rate"])?;
        for c in cells {
            for (&d_hat, &count) in &c.histogram {
                w.write_record([
                    c.d.to_string(),
                    c.n.to_string(),
                    c.method.to_string(),
                    c.replicates.to_string(),
                    d_hat.to_string(),
                    count.to_string(),
                    c.rate(d_hat).to_string(),
                ])?;
            }
        }
        Ok(())
    })
}

pub fn table2_csv(rows: &[Table2Row]) -> Result<String> {
    csv_string(|w| {
        let mut header = vec!["d".to_string(), "n".into(), "aggregated".into(), "kind".into()];
        header.extend((1..=TABLE2_EIGENVALUES).map(|j| format!("lambda_{j}")));
        w.write_record(&header)?;
        for r in rows {
            let mut rec = vec![
                r.d.to_string(),
                r.n.map(|n| n.to_string()).unwrap_or_else(|| "true".into()),
                r.aggregated.to_string(),
                match r.kind {
                    RowKind::Estimate => "estimate".into(),
                    RowKind::True => "true".into(),
                },
            ];
            rec.extend(r.values.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        Ok(())
    })
}

/// Errors per `n` with the `n^{-1/2}` reference curve anchored at the first
/// row.
pub fn convergence_csv(table: &ConvergenceTable) -> Result<String> {
    csv_string(|w| {
        let mut header = vec!["n".to_string()];
        header.extend((1..=table.d).map(|j| format!("error_{j}")));
        header.push("reference".into());
        w.write_record(&header)?;
        let (n0, e0) = (table.rows[0].n as f64, table.rows[0].mean_abs_error[0]);
        for r in &table.rows {
            let mut rec = vec![r.n.to_string()];
            rec.extend(r.mean_abs_error.iter().map(|v| v.to_string()));
            rec.push((e0 * (r.n as f64 / n0).powf(table.reference_slope)).to_string());
            w.write_record(&rec)?;
        }
        Ok(())
    })
}
