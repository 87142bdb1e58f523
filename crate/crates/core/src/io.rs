//! Curve CSV files and JSON reports.
//!
//! Curve files are UTF-8, comma separated, with `.` decimals. The first row
//! holds the grid abscissae; every following row is one curve, in temporal
//! order. Grids whose length is not a power of two are linearly
//! interpolated onto the next dyadic length spanning the same first and last
//! abscissa.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::{CurvePanel, Grid};

/// Schema tag written into every JSON report.
pub const REPORT_SCHEMA: &str = "curvedim-report/1";

const GRID_TOL: f64 = 1e-8;

/// A panel read from disk and how it was obtained.
#[derive(Debug, Clone)]
pub struct IngestedPanel {
    pub panel: CurvePanel,
    pub original_len: usize,
    pub resampled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub path: String,
    pub n_curves: usize,
    pub grid_len: usize,
    pub original_grid_len: usize,
    pub resampled: bool,
    pub grid_start: f64,
    pub grid_spacing: f64,
}

impl IngestedPanel {
    pub fn summary(&self, path: &str) -> InputSummary {
        InputSummary {
            path: path.to_string(),
            n_curves: self.panel.n_curves(),
            grid_len: self.panel.grid.len,
            original_grid_len: self.original_len,
            resampled: self.resampled,
            grid_start: self.panel.grid.start,
            grid_spacing: self.panel.grid.spacing,
        }
    }
}

fn parse_row(record: &csv::StringRecord, line: u64) -> Result<Vec<f64>> {
    record
        .iter()
        .enumerate()
        .map(|(col, field)| {
            field.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                Error::MalformedCsv(format!("line {line}, column {}: `{field}` is not a finite number", col + 1))
            })
        })
        .collect()
}

/// Parses a curve CSV and requires at least `min_curves` curves.
pub fn read_curves<R: Read>(reader: R, min_curves: usize) -> Result<IngestedPanel> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::MalformedCsv(e.to_string()))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(i as u64 + 1);
        rows.push(parse_row(&rec, line)?);
    }
    let Some((x, curves)) = rows.split_first() else {
        return Err(Error::MalformedCsv("empty file".into()));
    };
    if x.len() < 2 {
        return Err(Error::MalformedCsv("grid row needs at least two abscissae".into()));
    }
    for (i, c) in curves.iter().enumerate() {
        if c.len() != x.len() {
            return Err(Error::MalformedCsv(format!(
                "curve {} has {} values for a grid of {}",
                i + 1,
                c.len(),
                x.len()
            )));
        }
    }
    if curves.len() < min_curves.max(1) {
        return Err(Error::TooFewCurves { got: curves.len(), need: min_curves.max(1) });
    }

    let len = x.len();
    let spacing = (x[len - 1] - x[0]) / (len - 1) as f64;
    if !(spacing > 0.0) {
        return Err(Error::NonUniformGrid("abscissae must increase".into()));
    }
    for (i, w) in x.windows(2).enumerate() {
        if ((w[1] - w[0]) - spacing).abs() > GRID_TOL * spacing {
            return Err(Error::NonUniformGrid(format!(
                "step {} is {} against a mean spacing of {spacing}",
                i + 1,
                w[1] - w[0]
            )));
        }
    }

    if len.is_power_of_two() {
        let grid = Grid::new(x[0], spacing, len)?;
        return Ok(IngestedPanel { panel: CurvePanel::from_rows(grid, curves)?, original_len: len, resampled: false });
    }
    let target = len.next_power_of_two();
    let grid = Grid::new(x[0], (x[len - 1] - x[0]) / (target - 1) as f64, target)?;
    let resampled: Vec<Vec<f64>> = curves.iter().map(|c| interpolate(x[0], spacing, c, &grid)).collect();
    Ok(IngestedPanel { panel: CurvePanel::from_rows(grid, &resampled)?, original_len: len, resampled: true })
}

/// Piecewise-linear evaluation of samples on `x0 + iΔ` at the points of
/// `grid`.
fn interpolate(x0: f64, spacing: f64, values: &[f64], grid: &Grid) -> Vec<f64> {
    let last = values.len() - 1;
    (0..grid.len)
        .map(|i| {
            if i == grid.len - 1 {
                return values[last];
            }
            let pos = (grid.point(i) - x0) / spacing;
            let k = (pos.floor().max(0.0) as usize).min(last - 1);
            let frac = (pos - k as f64).clamp(0.0, 1.0);
            values[k] + frac * (values[k + 1] - values[k])
        })
        .collect()
}

pub fn ingest_curves(path: &Path, min_curves: usize) -> Result<IngestedPanel> {
    let file = std::fs::File::open(path)?;
    read_curves(std::io::BufReader::new(file), min_curves)
}

/// Renders a panel in the curve CSV format.
pub fn curves_csv(panel: &CurvePanel) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(panel.grid.points().iter().map(|v| v.to_string())).map_err(csv_err)?;
    for t in 0..panel.n_curves() {
        w.write_record(panel.curve(t).iter().map(|v| v.to_string())).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e)))
}

/// Writes `contents` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// JSON formatter printing every float with 17 significant digits.
struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with 17-digit floats and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| Error::Io(std::io::Error::other(e)))
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_text(x: &[f64], curves: &[Vec<f64>]) -> String {
        let mut s = x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        s.push('\n');
        for c in curves {
            s.push_str(&c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }

    #[test]
    fn dyadic_input_passes_through() {
        let x: Vec<f64> = (0..256).map(|i| i as f64 / 256.0).collect();
        let curves: Vec<Vec<f64>> = (0..8).map(|t| x.iter().map(|v| (v * t as f64).sin()).collect()).collect();
        let ing = read_curves(csv_text(&x, &curves).as_bytes(), 7).unwrap();
        assert!(!ing.resampled);
        assert_eq!(ing.panel.grid.len, 256);
        assert_eq!(ing.panel.rows(), curves);
        assert_eq!(ing.panel.grid.points(), x);
    }

    #[test]
    fn eighty_points_are_resampled_linearly() {
        let x: Vec<f64> = (0..80).map(|i| 15.0 + 0.5 * i as f64).collect();
        let f = |v: f64| (v / 7.0).sin() + 0.01 * v * v;
        let curves = vec![x.iter().map(|&v| f(v)).collect::<Vec<f64>>(); 3];
        let ing = read_curves(csv_text(&x, &curves).as_bytes(), 2).unwrap();
        assert!(ing.resampled);
        assert_eq!(ing.original_len, 80);
        assert_eq!(ing.panel.grid.len, 128);
        let grid = ing.panel.grid;
        assert_eq!(grid.point(0), 15.0);
        assert!((grid.point(127) - 54.5).abs() < 1e-12);
        // Independent oracle: locate the bracketing pair by search.
        for i in 0..128 {
            let u = grid.point(i);
            let k = x.iter().rposition(|&v| v <= u + 1e-12).unwrap().min(78);
            let (x0, x1) = (x[k], x[k + 1]);
            let expect = curves[0][k] + (u - x0) / (x1 - x0) * (curves[0][k + 1] - curves[0][k]);
            assert!((ing.panel.values[(1, i)] - expect).abs() < 1e-10, "i={i}");
        }
    }

    #[test]
    fn malformed_inputs() {
        let short_header = "0,0.5\n1,2,3\n1,2,3\n";
        assert!(matches!(read_curves(short_header.as_bytes(), 1), Err(Error::MalformedCsv(_))));
        assert!(matches!(read_curves("".as_bytes(), 1), Err(Error::MalformedCsv(_))));
        assert!(matches!(read_curves("0,1\n1,abc\n".as_bytes(), 1), Err(Error::MalformedCsv(_))));
        assert!(matches!(read_curves("0,1\n1,nan\n".as_bytes(), 1), Err(Error::MalformedCsv(_))));
        assert!(matches!(read_curves("0,1,3,4\n1,2,3,4\n".as_bytes(), 1), Err(Error::NonUniformGrid(_))));
        assert!(matches!(read_curves("1,0\n1,2\n".as_bytes(), 1), Err(Error::NonUniformGrid(_))));
        assert!(matches!(
            read_curves("0,1\n1,2\n3,4\n".as_bytes(), 7),
            Err(Error::TooFewCurves { got: 2, need: 7 })
        ));
    }

    #[test]
    fn serialize_then_ingest_is_idempotent() {
        let x: Vec<f64> = (0..16).map(|i| -1.0 + i as f64 / 8.0).collect();
        let curves: Vec<Vec<f64>> = (0..4).map(|t| x.iter().map(|v| (v + t as f64).exp() / 3.0).collect()).collect();
        let first = read_curves(csv_text(&x, &curves).as_bytes(), 1).unwrap();
        let text = curves_csv(&first.panel).unwrap();
        let second = read_curves(text.as_bytes(), 1).unwrap();
        assert_eq!(first.panel, second.panel);
        assert_eq!(curves_csv(&second.panel).unwrap(), text);
    }

    #[test]
    fn json_keeps_full_precision() {
        let v = vec![0.1f64, 1.0 / 3.0, -2.5e-300, 4.869_281_045_751_634];
        let text = to_json(&v).unwrap();
        assert!(text.contains("3.3333333333333331e-1"));
        let back: Vec<f64> = from_json(&text).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
