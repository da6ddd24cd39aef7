//! File formats: flat little-endian complex binaries with JSON grid sidecars, and CSV tables.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::signal::{DiagnosticTable, GridSpec, SampledFunction};
use crate::transforms::{FieldKind, TimeFreqField};
use crate::{Error, Result, C64};

/// Sample encoding written to every sidecar.
pub const SAMPLE_FORMAT: &str = "complex-f64-le";

#[derive(Serialize, Deserialize)]
struct FunctionSidecar {
    dim: usize,
    half_width: f64,
    points: usize,
    #[serde(default = "default_format")]
    sample_format: String,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct FieldSidecar {
    kind: FieldKind,
    x_grid: GridSpec,
    xi_grid: GridSpec,
    #[serde(default = "default_format")]
    sample_format: String,
}

fn default_format() -> String {
    SAMPLE_FORMAT.to_string()
}

/// Sidecar path: the binary path with its extension replaced by `json`.
pub fn sidecar_path(bin: &Path) -> PathBuf {
    bin.with_extension("json")
}

fn encode(samples: &[C64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(samples.len() * 16);
    for z in samples {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

fn decode(bytes: &[u8], expected: usize) -> Result<Vec<C64>> {
    if bytes.len() != expected * 16 {
        return Err(Error::Data(format!("binary holds {} bytes, expected {} complex samples", bytes.len(), expected)));
    }
    Ok(bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect())
}

fn check_format(f: &str) -> Result<()> {
    if f != SAMPLE_FORMAT {
        return Err(Error::Data(format!("unsupported sample format `{f}`")));
    }
    Ok(())
}

pub fn write_function(path: &Path, f: &SampledFunction) -> Result<()> {
    fs::write(path, encode(f.samples()))?;
    let side = FunctionSidecar {
        dim: f.grid.dim,
        half_width: f.grid.half_width,
        points: f.grid.points,
        sample_format: default_format(),
    };
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&side)?)?;
    Ok(())
}

pub fn read_function(path: &Path) -> Result<SampledFunction> {
    let side: FunctionSidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
    check_format(&side.sample_format)?;
    let grid = GridSpec::new(side.dim, side.half_width, side.points)?;
    let samples = decode(&fs::read(path)?, grid.len())?;
    let f = SampledFunction::new(grid, samples)?;
    f.check_finite()?;
    Ok(f)
}

pub fn write_field(path: &Path, field: &TimeFreqField) -> Result<()> {
    fs::write(path, encode(&field.samples))?;
    let side = FieldSidecar {
        kind: field.kind,
        x_grid: field.x_grid,
        xi_grid: field.xi_grid,
        sample_format: default_format(),
    };
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&side)?)?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<TimeFreqField> {
    let side: FieldSidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
    check_format(&side.sample_format)?;
    let samples = decode(&fs::read(path)?, side.x_grid.points * side.xi_grid.points)?;
    TimeFreqField::new(side.x_grid, side.xi_grid, samples, side.kind)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Data(format!("csv: {e}"))
}

/// Writes a header and rows of already formatted fields.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Fixed float formatting shared by all text outputs.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.16e}")
    }
}

/// `index, log_value` rows.
pub fn write_log_values(path: &Path, values: &[f64]) -> Result<()> {
    let rows: Vec<Vec<String>> = values.iter().enumerate().map(|(i, v)| vec![i.to_string(), fmt_f64(*v)]).collect();
    write_csv(path, &["index", "log_value"], &rows)
}

pub fn write_table(path: &Path, table: &DiagnosticTable) -> Result<()> {
    let header: Vec<&str> = table.columns.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = table.rows.iter().map(|r| r.iter().map(|v| fmt_f64(*v)).collect()).collect();
    write_csv(path, &header, &rows)
}

/// `|F|` as a matrix: one CSV row per `x`, one column per `ξ`, preceded by a header of `ξ` values.
pub fn write_heatmap(path: &Path, field: &TimeFreqField) -> Result<()> {
    let mut header = vec!["x\\xi".to_string()];
    header.extend(field.xi_grid.coords().iter().map(|v| fmt_f64(*v)));
    let rows: Vec<Vec<String>> = (0..field.nx())
        .map(|j| {
            let mut r = vec![fmt_f64(field.x_grid.coord(j))];
            r.extend((0..field.nxi()).map(|k| fmt_f64(field.get(j, k).norm())));
            r
        })
        .collect();
    let h: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(path, &h, &rows)
}

/// Reads a CSV with a header row into numeric rows (`inf`, `-inf`, `NaN` accepted).
pub fn read_csv_numbers(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| Error::Data(format!("non-numeric CSV field `{s}`"))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}
