//! Deterministic CSV and JSON writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use quatsurf::correspondence::CorrespondencePair;
use quatsurf::curve::SampledCurve;
use quatsurf::frame::QuatFrameSamples;
use quatsurf::surface::GeometryReport;

use crate::CliError;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

/// Writes `value` as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<PathBuf, CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| io_err(path)(e.into()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(io_err(path))?;
    Ok(path.to_path_buf())
}

pub fn write_text(path: &Path, text: &str) -> Result<PathBuf, CliError> {
    std::fs::write(path, text).map_err(io_err(path))?;
    Ok(path.to_path_buf())
}

fn write_rows(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<PathBuf, CliError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let map = |e: csv::Error| io_err(path)(e.into());
    w.write_record(header).map_err(map)?;
    for r in rows {
        w.write_record(r.iter().map(|v| v.to_string())).map_err(map)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(path.to_path_buf())
}

pub const SURFACE_COLUMNS: [&str; 11] = ["s", "t", "F", "e", "f", "g", "H", "K", "K_ext", "min_res", "umb_defect"];

/// One row per grid node; `F` is the metric coefficient `⟨X_s, X_t⟩`.
pub fn write_surface_csv(path: &Path, r: &GeometryReport) -> Result<PathBuf, CliError> {
    let (rows, cols) = (r.forms.rows(), r.forms.cols());
    write_rows(
        path,
        &SURFACE_COLUMNS,
        (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| {
            let c = r.forms.at(i, j);
            vec![
                r.s[i],
                r.t[j],
                c.g12,
                c.h11,
                c.h12,
                c.h22,
                r.h.at(i, j),
                r.k.at(i, j),
                r.k_ext.at(i, j),
                r.minimality.at(i, j),
                r.umbilicity.at(i, j),
            ]
        }),
    )
}

pub fn write_curve_csv(path: &Path, c: &SampledCurve, left: &QuatFrameSamples) -> Result<PathBuf, CliError> {
    write_rows(
        path,
        &["s", "x1", "x2", "x3", "x4", "kappa", "tau", "T1", "T2", "T3"],
        c.samples.iter().zip(&left.t).map(|(p, t)| {
            let x = p.position().to_array();
            let t = t.vec();
            vec![p.s, x[0], x[1], x[2], x[3], p.kappa, p.tau, t.x, t.y, t.z]
        }),
    )
}

pub fn write_r3_csv(path: &Path, pair: &CorrespondencePair) -> Result<PathBuf, CliError> {
    let r = &pair.r3_report;
    let (rows, cols) = (r.forms.rows(), r.forms.cols());
    write_rows(
        path,
        &["s", "t", "F", "e", "g", "H", "K", "H_s3", "K_s3"],
        (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| {
            let c = r.forms.at(i, j);
            vec![
                r.s[i],
                r.t[j],
                c.g12,
                c.h11,
                c.h22,
                r.h.at(i, j),
                r.k.at(i, j),
                pair.s3_report.h.at(i, j),
                pair.s3_report.k.at(i, j),
            ]
        }),
    )
}

pub fn write_mesh_scalars(path: &Path, r: &GeometryReport) -> Result<PathBuf, CliError> {
    let cols = r.forms.cols();
    write_rows(
        path,
        &["vertex", "s", "t", "H", "K"],
        (0..r.forms.rows() * cols).map(|k| {
            let (i, j) = (k / cols, k % cols);
            vec![(k + 1) as f64, r.s[i], r.t[j], r.h.at(i, j), r.k.at(i, j)]
        }),
    )
}
