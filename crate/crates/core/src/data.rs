//! CSV ingestion, the bundled prostate data, collinearity diagnostics and
//! report writers.
//!
//! Report files for a prefix `P`:
//!
//! - `P_medians.csv`: `Algorithm,RMSE,(k;d),alpha,t,Selected variables`, one row
//!   per algorithm, numbers to 5 decimals, `-` where an estimator has no k/d.
//! - `P_replicates.csv`: `algorithm,replicate,rmse` in long format with full
//!   precision.
//! - `P.json`: the whole report (see `docs/report-schema.md`).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{GlarsError, Result};
use crate::path::standardize;
use crate::simulation::{SimulationReport, TableRow};
use crate::Dataset;

const PROSTATE_CSV: &str = include_str!("../data/prostate.csv");
const PROSTATE_SPLIT_CSV: &str = include_str!("../data/prostate_split.csv");
const PROSTATE_SHA256: &str = "fcd8752c0d0b76a0a10e98f6f504d439b2f6301a121f6088bfad54d0afd30cf1";
const PROSTATE_SPLIT_SHA256: &str = "d4b3096af0490386327691db218933c3410d1b4d706aae644ddc7305622164f6";
pub const PROSTATE_RESPONSE: &str = "lpsa";
pub const PROSTATE_TRAIN_ROWS: usize = 67;

/// R² at or above this makes a VIF infinite.
const COLLINEAR_R2: f64 = 1.0 - 1e-12;

/// Predictors and response as read, with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularDataset {
    pub column_names: Vec<String>,
    pub x_raw: DMatrix<f64>,
    pub y_raw: DVector<f64>,
    pub response_name: String,
    pub provenance: String,
}

impl TabularDataset {
    pub fn n(&self) -> usize {
        self.x_raw.nrows()
    }

    pub fn p(&self) -> usize {
        self.x_raw.ncols()
    }

    pub fn to_dataset(&self) -> Dataset {
        Dataset {
            x: self.x_raw.clone(),
            y: self.y_raw.clone(),
        }
    }

    pub fn select_rows(&self, rows: &[usize], provenance: String) -> Self {
        Self {
            column_names: self.column_names.clone(),
            x_raw: self.x_raw.select_rows(rows),
            y_raw: DVector::from_iterator(rows.len(), rows.iter().map(|&i| self.y_raw[i])),
            response_name: self.response_name.clone(),
            provenance,
        }
    }

    /// Writes predictors then the response, full precision.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let mut header = self.column_names.clone();
        header.push(self.response_name.clone());
        w.write_record(&header)?;
        for i in 0..self.n() {
            let mut rec: Vec<String> = self.x_raw.row(i).iter().map(|v| v.to_string()).collect();
            rec.push(self.y_raw[i].to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn parse_table<R: std::io::Read>(
    reader: R,
    response: &str,
    delimiter: u8,
    origin: &Path,
    provenance: String,
) -> Result<TabularDataset> {
    let mut rdr = csv::ReaderBuilder::new().delimiter(delimiter).from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let y_col = headers
        .iter()
        .position(|h| h == response)
        .ok_or_else(|| GlarsError::MissingColumn(response.to_string()))?;
    let column_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != y_col)
        .map(|(_, h)| h.clone())
        .collect();
    let p = column_names.len();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        // row numbers are 1-based data rows, header excluded
        let row = i + 1;
        for (j, cell) in rec.iter().enumerate() {
            let v: f64 = cell.trim().parse().map_err(|_| GlarsError::NonNumericCell {
                row,
                column: headers[j].clone(),
                value: cell.to_string(),
            })?;
            if !v.is_finite() {
                return Err(GlarsError::NonNumericCell {
                    row,
                    column: headers[j].clone(),
                    value: cell.to_string(),
                });
            }
            if j == y_col {
                ys.push(v);
            } else {
                xs.push(v);
            }
        }
    }
    if ys.is_empty() {
        return Err(GlarsError::EmptyFile(origin.to_path_buf()));
    }
    let n = ys.len();
    Ok(TabularDataset {
        column_names,
        x_raw: DMatrix::from_row_slice(n, p, &xs),
        y_raw: DVector::from_vec(ys),
        response_name: response.to_string(),
        provenance,
    })
}

/// Reads a headed CSV, taking `response` as y and every other column as a
/// predictor. Row numbers in errors count data rows from 1.
pub fn load_csv(path: &Path, response: &str, delimiter: u8) -> Result<TabularDataset> {
    let file = fs::File::open(path)?;
    parse_table(file, response, delimiter, path, path.display().to_string())
}

fn verify(content: &str, expected: &str, file: &'static str) -> Result<()> {
    let digest = hex::encode(Sha256::digest(content.as_bytes()));
    if digest != expected {
        return Err(GlarsError::CorruptBundle { file });
    }
    Ok(())
}

/// The 97-row prostate table, response `lpsa`.
pub fn prostate_full() -> Result<TabularDataset> {
    verify(PROSTATE_CSV, PROSTATE_SHA256, "prostate.csv")?;
    parse_table(
        PROSTATE_CSV.as_bytes(),
        PROSTATE_RESPONSE,
        b',',
        Path::new("prostate.csv"),
        "bundled prostate.csv (Stamey et al. 1989)".into(),
    )
}

fn canonical_train_rows() -> Result<Vec<usize>> {
    verify(PROSTATE_SPLIT_CSV, PROSTATE_SPLIT_SHA256, "prostate_split.csv")?;
    let mut rows = Vec::new();
    for (i, line) in PROSTATE_SPLIT_CSV.lines().skip(1).enumerate() {
        if line.trim() == "1" {
            rows.push(i);
        }
    }
    Ok(rows)
}

/// Random `n_train` of `n` row indices and the rest, each ascending.
pub fn seeded_split(n: usize, n_train: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut train = idx[..n_train.min(n)].to_vec();
    let mut test = idx[n_train.min(n)..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

/// Prostate train (67 rows) and test (30 rows). Without a seed the shipped
/// indicator column decides; with one, a seeded shuffle does.
pub fn load_prostate(split_seed: Option<u64>) -> Result<(TabularDataset, TabularDataset)> {
    let full = prostate_full()?;
    let n = full.n();
    let train: Vec<usize> = match split_seed {
        None => canonical_train_rows()?,
        Some(seed) => seeded_split(n, PROSTATE_TRAIN_ROWS, seed).0,
    };
    let test: Vec<usize> = (0..n).filter(|i| !train.contains(i)).collect();
    let label = match split_seed {
        None => "canonical split".to_string(),
        Some(s) => format!("seeded split {s}"),
    };
    Ok((
        full.select_rows(&train, format!("prostate train, {label}")),
        full.select_rows(&test, format!("prostate test, {label}")),
    ))
}

/// Variance inflation factors and condition numbers of a design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `1 / (1 − R²_j)`; `f64::INFINITY` for an exactly collinear column
    /// (serialized as `null`).
    pub vif: Vec<f64>,
    /// Ratio of extreme singular values of the standardized design.
    pub condition_number: f64,
    /// Same ratio for the raw, uncentered design.
    pub condition_number_raw: f64,
    /// Same ratio for the centered, unscaled design.
    pub condition_number_centered: f64,
}

fn singular_ratio(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn diagnostics(x: &DMatrix<f64>) -> Result<Diagnostics> {
    let (n, p) = x.shape();
    let std = standardize(x, &DVector::zeros(n))?;
    let xs = &std.x;
    let mut vif = Vec::with_capacity(p);
    for j in 0..p {
        if p == 1 {
            vif.push(1.0);
            continue;
        }
        let others: Vec<usize> = (0..p).filter(|&k| k != j).collect();
        let a = xs.select_columns(&others);
        let b = xs.column(j).into_owned();
        // columns are centered, so no intercept column is needed
        let svd = a.clone().svd(true, true);
        let tol = 1e-12 * svd.singular_values.max() * n.max(p) as f64;
        let coef = svd.solve(&b, tol).map_err(|e| GlarsError::DimensionMismatch(e.to_string()))?;
        let resid = &b - &a * coef;
        let r2 = 1.0 - resid.norm_squared() / b.norm_squared();
        vif.push(if r2 >= COLLINEAR_R2 { f64::INFINITY } else { 1.0 / (1.0 - r2) });
    }
    let mut centered = x.clone();
    for (mut col, m) in centered.column_iter_mut().zip(&std.col_means) {
        col.add_scalar_mut(-m);
    }
    Ok(Diagnostics {
        vif,
        condition_number: singular_ratio(xs),
        condition_number_raw: singular_ratio(x),
        condition_number_centered: singular_ratio(&centered),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportFormat {
    Csv,
    Json,
}

pub const MEDIANS_HEADER: [&str; 6] = ["Algorithm", "RMSE", "(k;d)", "alpha", "t", "Selected variables"];

fn fmt5(v: f64) -> String {
    format!("{v:.5}")
}

/// Writes a results table in the median-table layout.
pub fn write_table(rows: &[TableRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(MEDIANS_HEADER)?;
    for r in rows {
        w.write_record([
            r.algorithm.clone(),
            fmt5(r.rmse),
            r.shrinkage.map_or_else(|| "-".to_string(), fmt5),
            fmt5(r.alpha),
            fmt5(r.t),
            r.selected.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    Ok(())
}

/// Writes `<prefix>_medians.csv` and `<prefix>_replicates.csv` (csv) or
/// `<prefix>.json` (json) into `out_dir`, returning the paths written.
pub fn write_report(
    report: &SimulationReport,
    format: ReportFormat,
    out_dir: &Path,
    prefix: &str,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    match format {
        ReportFormat::Csv => {
            let medians = out_dir.join(format!("{prefix}_medians.csv"));
            write_table(&report.median_table(), &medians)?;
            let replicates = out_dir.join(format!("{prefix}_replicates.csv"));
            let mut w = csv::Writer::from_path(&replicates)?;
            w.write_record(["algorithm", "replicate", "rmse"])?;
            for a in &report.algorithms {
                for r in &a.replicates {
                    w.write_record([a.algorithm.clone(), r.replicate.to_string(), r.result.rmse.to_string()])?;
                }
            }
            w.flush()?;
            Ok(vec![medians, replicates])
        }
        ReportFormat::Json => {
            let path = out_dir.join(format!("{prefix}.json"));
            write_json(report, &path)?;
            Ok(vec![path])
        }
    }
}

/// Table-only output (a single evaluation per algorithm).
pub fn write_rows(rows: &[TableRow], format: ReportFormat, out_dir: &Path, prefix: &str) -> Result<PathBuf> {
    fs::create_dir_all(out_dir)?;
    match format {
        ReportFormat::Csv => {
            let path = out_dir.join(format!("{prefix}_medians.csv"));
            write_table(rows, &path)?;
            Ok(path)
        }
        ReportFormat::Json => {
            let path = out_dir.join(format!("{prefix}.json"));
            write_json(&rows, &path)?;
            Ok(path)
        }
    }
}

pub fn read_report_json(path: &Path) -> Result<SimulationReport> {
    Ok(serde_json::from_reader(fs::File::open(path)?)?)
}
