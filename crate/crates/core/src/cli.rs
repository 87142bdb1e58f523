//! Command-line front end.
//!
//! Every subcommand writes one file (or stdout): a JSON report tagged
//! `curvedim-report/1` or a CSV table. Reports echo the fully resolved
//! configuration, so a report alone is enough to rerun it.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::aggregate::{aggregate_kernel_eigen, build_kstar, AggregationSpec};
use crate::bootstrap::{analyze, BootstrapConfig, BootstrapMethod, PValue};
use crate::density::{sqrt_density_curves, square_to_density};
use crate::error::{Error, Result};
use crate::estimator::{center_coefficients, eigenfunctions, scores_and_fit, KernelEigen};
use crate::io::{self, IngestedPanel, InputSummary, REPORT_SCHEMA};
use crate::panel::{CoefficientPanel, CurvePanel, Grid};
use crate::sim::{self, ConvergenceTable, SimDesign, Table1Cell, Table2Row};
use crate::wavelet::{build_wavelet_system, decompose, ThresholdRule, WaveletFamily, WaveletSystem};

/// Environment variable supplying the default `--seed`.
pub const SEED_ENV: &str = "CURVEDIM_SEED";

const DEFAULT_J0: u32 = 5;

#[derive(Parser, Debug)]
#[command(name = "curvedim", version, about = "Estimate the dimension of a curve time series")]
pub struct Cli {
    /// Worker threads for replicate loops (default: all cores). Does not
    /// affect results.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "args", rename_all = "snake_case")]
pub enum Command {
    /// Select the dimension of a curve panel with a bootstrap test.
    Estimate(EstimateArgs),
    /// Spectrum of the kernel for temporally aggregated curves.
    Aggregate(AggregateArgs),
    /// Write one simulated panel as a curve CSV.
    Simulate(SimulateArgs),
    /// Monte Carlo experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Turn sampled square-root densities into normalised densities.
    Density(DensityArgs),
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", content = "params", rename_all = "snake_case")]
pub enum ExperimentCommand {
    /// Selection frequencies of the estimated dimension.
    Table1(Table1Args),
    /// Average leading eigenvalues against their true values.
    Table2(Table2Args),
    /// Mean eigenvalue error as the sample size grows.
    Convergence(ConvergenceArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveletArgs {
    /// Daubechies family, `daub1`..`daub10` (`haar` = `daub1`).
    #[arg(long, default_value = "daub4")]
    pub wavelet: String,
    /// Coarsest level [default: min(5, jmax)].
    #[arg(long)]
    pub j0: Option<u32>,
    /// Finest detail level kept [default: finest the grid allows].
    #[arg(long)]
    pub jmax: Option<u32>,
}

impl WaveletArgs {
    /// Fills in defaults for `grid_len` and builds the system.
    fn resolve(&mut self, grid_len: usize) -> Result<WaveletSystem> {
        let family: WaveletFamily = self.wavelet.parse()?;
        if !grid_len.is_power_of_two() || grid_len < 2 {
            return Err(Error::GridNotDyadic(grid_len));
        }
        let jmax = self.jmax.unwrap_or(grid_len.trailing_zeros() - 1);
        let j0 = self.j0.unwrap_or(DEFAULT_J0.min(jmax));
        self.wavelet = family.to_string();
        self.jmax = Some(jmax);
        self.j0 = Some(j0);
        build_wavelet_system(family, j0, jmax)
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputArgs {
    /// Output path [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format [default: json for reports, csv for tables].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Omit the generation time from JSON reports.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapArgs {
    /// ordinary, threshold_before, thresholded_residual or wavestrap.
    #[arg(long, default_value = "ordinary")]
    pub method: String,
    /// Bootstrap replicates per test.
    #[arg(long = "B", default_value_t = 100)]
    pub b: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Largest dimension tested.
    #[arg(long, default_value_t = 10)]
    pub d_max: usize,
    /// `universal` or a fixed non-negative level.
    #[arg(long, default_value = "universal")]
    pub threshold: String,
    /// Build replicates as fitted value plus resampled residual.
    #[arg(long)]
    pub literal_prose: bool,
}

impl BootstrapArgs {
    fn config(&self, seed: u64) -> Result<BootstrapConfig> {
        let cfg = BootstrapConfig {
            method: self.method.parse()?,
            replicates: self.b,
            alpha: self.alpha,
            seed,
            d_max: self.d_max,
            threshold: parse_threshold(&self.threshold)?,
            literal_prose: self.literal_prose,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_threshold(s: &str) -> Result<ThresholdRule> {
    if s.trim().eq_ignore_ascii_case("universal") {
        return Ok(ThresholdRule::Universal);
    }
    match s.trim().parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(ThresholdRule::Fixed(v)),
        _ => Err(Error::InvalidConfig(format!("threshold `{s}` is neither `universal` nor a non-negative number"))),
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateArgs {
    /// Curve CSV: grid row, then one curve per row.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub wavelet: WaveletArgs,
    /// Maximum lag.
    #[arg(long, default_value_t = 5)]
    pub p: usize,
    #[command(flatten)]
    pub bootstrap: BootstrapArgs,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub wavelet: WaveletArgs,
    #[arg(long, default_value_t = 5)]
    pub p: usize,
    /// Window length; must match the number of weights [default: that number].
    #[arg(long)]
    pub delta: Option<usize>,
    /// Aggregation weights `ω_0,…,ω_{δ−1}`.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.3,0.1")]
    pub weights: Vec<f64>,
    /// Eigenfunctions and scores to report.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 600)]
    pub n: usize,
    /// Grid length (power of two) on [0, 1).
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    #[arg(long, default_value_t = 1.5)]
    pub sigma_w2: f64,
    /// Replicate index within the seed's stream family.
    #[arg(long, default_value_t = 0)]
    pub replicate: usize,
    /// Omit the noise term.
    #[arg(long)]
    pub noiseless: bool,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignArgs {
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    #[arg(long, default_value_t = 1.5)]
    pub sigma_w2: f64,
    #[arg(long, default_value_t = 5)]
    pub p: usize,
    #[command(flatten)]
    pub wavelet: WaveletArgs,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

impl DesignArgs {
    fn design(&mut self, d: usize, n: usize, replicates: usize, aggregation: Option<AggregationSpec>) -> Result<SimDesign> {
        let sys = self.wavelet.resolve(self.grid)?;
        let design = SimDesign {
            d,
            n,
            grid_len: self.grid,
            sigma_w2: self.sigma_w2,
            p: self.p,
            seed: self.seed,
            replicates,
            aggregation,
            noiseless: false,
            family: sys.family,
            j0: sys.j0,
            jmax: sys.jmax,
        };
        design.validate()?;
        Ok(design)
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Args {
    #[command(flatten)]
    pub design: DesignArgs,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub ds: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "100,600")]
    pub ns: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "ordinary,threshold_before,thresholded_residual,wavestrap")]
    pub methods: Vec<String>,
    /// Monte Carlo replicates per cell.
    #[arg(long, default_value_t = 50)]
    pub replicates: usize,
    #[arg(long = "B", default_value_t = 100)]
    pub b: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10)]
    pub d_max: usize,
    #[arg(long, default_value = "universal")]
    pub threshold: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2Args {
    #[command(flatten)]
    pub design: DesignArgs,
    #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
    pub ds: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "100,300,600")]
    pub ns: Vec<usize>,
    /// Weights of the aggregate rows.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.3,0.1")]
    pub weights: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub replicates: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Plain,
    Aggregate,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub design: DesignArgs,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', default_value = "100,300,600")]
    pub ns: Vec<usize>,
    #[arg(long, value_enum, default_value = "aggregate")]
    pub route: Route,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.3,0.1")]
    pub weights: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub replicates: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityArgs {
    /// Curve CSV of square-root densities.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub wavelet: WaveletArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Envelope shared by every JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile<T> {
    pub schema: String,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
    pub seed: Option<u64>,
    pub config: Command,
    pub result: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub input: InputSummary,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub selected_d: usize,
    pub capped: bool,
    pub pvalues: Vec<PValue>,
    pub grid: Vec<f64>,
    pub mean_curve: Vec<f64>,
    /// `selected_d` curves sampled on `grid`.
    pub eigenfunctions: Vec<Vec<f64>>,
    /// `n × selected_d`.
    pub scores: Vec<Vec<f64>>,
}

pub type EstimateReportFile = ReportFile<EstimateResult>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    pub input: InputSummary,
    pub n_effective: usize,
    /// Spectrum of the coefficient-space kernel.
    pub eigenvalues: Vec<f64>,
    /// Spectrum of the inner-product matrix on the sampled curves.
    pub kstar_eigenvalues: Vec<f64>,
    pub grid: Vec<f64>,
    pub mean_curve: Vec<f64>,
    pub eigenfunctions: Vec<Vec<f64>>,
    pub scores: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityResult {
    pub input: InputSummary,
    pub grid: Vec<f64>,
    pub densities: Vec<Vec<f64>>,
    /// Trapezoid integral of each density.
    pub integrals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExperimentResult {
    Table1 { cells: Vec<Table1Cell> },
    Table2 { rows: Vec<Table2Row> },
    Convergence { table: ConvergenceTable },
}

fn envelope<T>(config: Command, seed: Option<u64>, output: &OutputArgs, result: T) -> ReportFile<T> {
    let generated_unix = if output.no_timestamp {
        None
    } else {
        SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
    };
    ReportFile {
        schema: REPORT_SCHEMA.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        generated_unix,
        seed,
        config,
        result,
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => io::write_atomic(path, text.as_bytes()),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn spectrum_csv(eigenvalues: &[f64], pvalues: &[PValue]) -> String {
    let mut s = String::from("component,eigenvalue,p_value\n");
    for (j, v) in eigenvalues.iter().enumerate() {
        let p = pvalues.iter().find(|p| p.d0 == j).map(|p| p.p_value.to_string()).unwrap_or_default();
        s.push_str(&format!("{},{},{}\n", j + 1, v, p));
    }
    s
}

fn components(
    coeffs: &CoefficientPanel,
    kernel: &KernelEigen,
    sys: &WaveletSystem,
    grid: &Grid,
    d: usize,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    if d == 0 {
        return Ok((Vec::new(), vec![Vec::new(); coeffs.n_curves()]));
    }
    let funcs = eigenfunctions(kernel, sys, grid, d)?;
    let (scores, _) = scores_and_fit(coeffs, kernel, d)?;
    Ok((funcs.rows(), scores.eta))
}

fn run_estimate(mut args: EstimateArgs) -> Result<()> {
    let ingested = io::ingest_curves(&args.input, args.p + 2)?;
    let panel = &ingested.panel;
    let sys = args.wavelet.resolve(panel.grid.len)?;
    let cfg = args.bootstrap.config(args.seed)?;
    args.bootstrap.method = cfg.method.to_string();
    let coeffs = decompose(panel, &sys)?;
    let analysis = analyze(&coeffs, &cfg, args.p)?;
    let d = analysis.report.selected_d;
    let (funcs, scores) = components(&analysis.coefficients, &analysis.kernel, &sys, &panel.grid, d)?;
    let format = *args.output.format.get_or_insert(Format::Json);
    let result = EstimateResult {
        input: ingested.summary(&args.input.to_string_lossy()),
        eigenvalues: analysis.report.eigenvalues.clone(),
        selected_d: d,
        capped: analysis.report.capped,
        pvalues: analysis.report.pvalues.clone(),
        grid: panel.grid.points(),
        mean_curve: panel.mean_curve(),
        eigenfunctions: funcs,
        scores,
    };
    let text = match format {
        Format::Json => {
            let out = args.output.clone();
            io::to_json(&envelope(Command::Estimate(args.clone()), Some(args.seed), &out, result))?
        }
        Format::Csv => spectrum_csv(&result.eigenvalues, &result.pvalues),
    };
    emit(args.output.out.as_deref(), &text)
}

fn run_aggregate(mut args: AggregateArgs) -> Result<()> {
    if let Some(delta) = args.delta {
        if delta != args.weights.len() {
            return Err(Error::InvalidConfig(format!("--delta {delta} but {} weights", args.weights.len())));
        }
    }
    args.delta = Some(args.weights.len());
    let spec = AggregationSpec::new(args.weights.clone(), args.p)?;
    let ingested: IngestedPanel = io::ingest_curves(&args.input, args.p + spec.delta + 1)?;
    let panel = &ingested.panel;
    let sys = args.wavelet.resolve(panel.grid.len)?;
    let coeffs = decompose(panel, &sys)?;
    let (centered, _) = center_coefficients(&coeffs)?;
    let kernel = aggregate_kernel_eigen(&centered, &spec)?;
    let kstar = build_kstar(panel, &spec)?;
    let d = args.d.min(kernel.dim());
    let (funcs, scores) = components(&coeffs, &kernel, &sys, &panel.grid, d)?;
    let format = *args.output.format.get_or_insert(Format::Json);
    let result = AggregateResult {
        input: ingested.summary(&args.input.to_string_lossy()),
        n_effective: kernel.n_effective,
        eigenvalues: kernel.eigenvalues.clone(),
        kstar_eigenvalues: kstar.eigenvalues.clone(),
        grid: panel.grid.points(),
        mean_curve: panel.mean_curve(),
        eigenfunctions: funcs,
        scores,
    };
    let text = match format {
        Format::Json => {
            let out = args.output.clone();
            io::to_json(&envelope(Command::Aggregate(args.clone()), None, &out, result))?
        }
        Format::Csv => spectrum_csv(&result.eigenvalues, &[]),
    };
    emit(args.output.out.as_deref(), &text)
}

fn run_simulate(args: SimulateArgs) -> Result<()> {
    let design = SimDesign {
        d: args.d,
        n: args.n,
        grid_len: args.grid,
        sigma_w2: args.sigma_w2,
        seed: args.seed,
        noiseless: args.noiseless,
        replicates: 1,
        ..SimDesign::default()
    };
    let panel = sim::generate_panel(&design, args.replicate)?;
    emit(args.out.as_deref(), &io::curves_csv(&panel)?)
}

fn parse_methods(names: &[String]) -> Result<Vec<BootstrapMethod>> {
    names.iter().map(|m| m.parse()).collect()
}

fn run_experiment(cmd: ExperimentCommand) -> Result<()> {
    match cmd {
        ExperimentCommand::Table1(mut a) => {
            let methods = parse_methods(&a.methods)?;
            a.methods = methods.iter().map(|m| m.to_string()).collect();
            let base = BootstrapConfig {
                replicates: a.b,
                alpha: a.alpha,
                d_max: a.d_max,
                threshold: parse_threshold(&a.threshold)?,
                ..BootstrapConfig::default()
            };
            let mut designs = Vec::new();
            for &d in &a.ds {
                for &n in &a.ns {
                    designs.push(a.design.design(d, n, a.replicates, None)?);
                }
            }
            let cells = sim::run_table1(&designs, &methods, &base)?;
            let format = *a.output.format.get_or_insert(Format::Csv);
            let text = match format {
                Format::Csv => sim::table1_csv(&cells)?,
                Format::Json => io::to_json(&envelope(
                    Command::Experiment(ExperimentCommand::Table1(a.clone())),
                    Some(a.design.seed),
                    &a.output,
                    ExperimentResult::Table1 { cells },
                ))?,
            };
            emit(a.output.out.as_deref(), &text)
        }
        ExperimentCommand::Table2(mut a) => {
            let mut designs = Vec::new();
            for &d in &a.ds {
                for &n in &a.ns {
                    designs.push(a.design.design(d, n, a.replicates, None)?);
                }
                for &n in &a.ns {
                    let spec = AggregationSpec::new(a.weights.clone(), a.design.p)?;
                    designs.push(a.design.design(d, n, a.replicates, Some(spec))?);
                }
            }
            let rows = sim::run_table2(&designs)?;
            let format = *a.output.format.get_or_insert(Format::Csv);
            let text = match format {
                Format::Csv => sim::table2_csv(&rows)?,
                Format::Json => io::to_json(&envelope(
                    Command::Experiment(ExperimentCommand::Table2(a.clone())),
                    Some(a.design.seed),
                    &a.output,
                    ExperimentResult::Table2 { rows },
                ))?,
            };
            emit(a.output.out.as_deref(), &text)
        }
        ExperimentCommand::Convergence(mut a) => {
            let spec = match a.route {
                Route::Aggregate => Some(AggregationSpec::new(a.weights.clone(), a.design.p)?),
                Route::Plain => None,
            };
            let first = *a.ns.first().ok_or_else(|| Error::InvalidConfig("--ns is empty".into()))?;
            let base = a.design.design(a.d, first, a.replicates, spec)?;
            let table = sim::run_convergence(&base, &a.ns)?;
            let format = *a.output.format.get_or_insert(Format::Csv);
            let text = match format {
                Format::Csv => sim::convergence_csv(&table)?,
                Format::Json => io::to_json(&envelope(
                    Command::Experiment(ExperimentCommand::Convergence(a.clone())),
                    Some(a.design.seed),
                    &a.output,
                    ExperimentResult::Convergence { table },
                ))?,
            };
            emit(a.output.out.as_deref(), &text)
        }
    }
}

fn run_density(mut args: DensityArgs) -> Result<()> {
    let ingested = io::ingest_curves(&args.input, 1)?;
    let grid = ingested.panel.grid;
    let sys = args.wavelet.resolve(grid.len)?;
    let curves = sqrt_density_curves(&ingested.panel, &sys)?;
    let mut densities = Vec::with_capacity(curves.len());
    for c in &curves {
        densities.push(square_to_density(c, &sys)?.curve(0));
    }
    let integrals: Vec<f64> = densities.iter().map(|f| grid.spacing * f.iter().sum::<f64>()).collect();
    let format = *args.output.format.get_or_insert(Format::Csv);
    let text = match format {
        Format::Csv => io::curves_csv(&CurvePanel::from_rows(grid, &densities)?)?,
        Format::Json => {
            let result = DensityResult {
                input: ingested.summary(&args.input.to_string_lossy()),
                grid: grid.points(),
                densities,
                integrals,
            };
            let out = args.output.clone();
            io::to_json(&envelope(Command::Density(args.clone()), None, &out, result))?
        }
    };
    emit(args.output.out.as_deref(), &text)
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    let go = move || match cli.command {
        Command::Estimate(a) => run_estimate(a),
        Command::Aggregate(a) => run_aggregate(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Experiment(e) => run_experiment(e),
        Command::Density(a) => run_density(a),
    };
    match cli.workers {
        Some(w) => crate::par::with_workers(w, go),
        None => go(),
    }
}
