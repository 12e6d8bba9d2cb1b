//! CSV input and output.
//!
//! Every float is written in scientific notation with 17 significant digits,
//! which round-trips `f64` exactly. Reading a file and writing it back
//! therefore reproduces the same bytes.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::numerics::{DenseMatrix, DenseVector};
use crate::path::{Interpolation, Method, PathSample, RegularizationPath};

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

/// Canonical text form of a float.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Csv(format!("line {line}: '{field}' is not a number")))
}

/// Writes a header row followed by data rows.
pub fn write_records<W: Write, S: AsRef<str>>(out: W, header: &[S], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header.iter().map(|h| h.as_ref()))?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Numeric table with an optional header.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTable {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_numeric<R: Read>(input: R, has_header: bool) -> Result<NumericTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .from_reader(input);
    let header = if has_header {
        Some(rdr.headers()?.iter().map(str::to_string).collect())
    } else {
        None
    };
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 1 + has_header as usize;
        rows.push(rec.iter().map(|f| parse_f64(f, line)).collect::<Result<Vec<_>>>()?);
    }
    Ok(NumericTable { header, rows })
}

pub fn read_matrix<R: Read>(input: R, has_header: bool) -> Result<DenseMatrix> {
    let table = read_numeric(input, has_header)?;
    if table.rows.is_empty() {
        return Err(Error::Csv("no data rows".into()));
    }
    DenseMatrix::from_rows(&table.rows)
}

/// Reads a single numeric column.
pub fn read_vector<R: Read>(input: R, has_header: bool) -> Result<DenseVector> {
    let table = read_numeric(input, has_header)?;
    if table.rows.is_empty() {
        return Err(Error::Csv("no data rows".into()));
    }
    table
        .rows
        .iter()
        .map(|r| match r.as_slice() {
            [v] => Ok(*v),
            _ => Err(Error::Csv(format!("expected one column, found {}", r.len()))),
        })
        .collect()
}

pub fn read_matrix_file(path: &Path, has_header: bool) -> Result<DenseMatrix> {
    read_matrix(File::open(path)?, has_header)
}

pub fn read_vector_file(path: &Path, has_header: bool) -> Result<DenseVector> {
    read_vector(File::open(path)?, has_header)
}

pub fn write_matrix<W: Write>(out: W, m: &DenseMatrix) -> Result<()> {
    let header: Vec<String> = (1..=m.cols()).map(|j| format!("x_{j}")).collect();
    let rows: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).into_iter().map(fmt_f64).collect())
        .collect();
    write_records(out, &header, &rows)
}

pub fn write_vector<W: Write>(out: W, name: &str, v: &[f64]) -> Result<()> {
    let rows: Vec<Vec<String>> = v.iter().map(|x| vec![fmt_f64(*x)]).collect();
    write_records(out, &[name], &rows)
}

/// Columns `lambda, beta_1..beta_p`, plus `degenerate` (0/1) when the
/// samples carry the flag.
pub fn write_path<W: Write>(out: W, path: &RegularizationPath) -> Result<()> {
    let p = path.p();
    let flagged = path.samples.iter().any(|s| s.degenerate.is_some());
    let mut header = vec!["lambda".to_string()];
    header.extend((1..=p).map(|j| format!("beta_{j}")));
    if flagged {
        header.push("degenerate".into());
    }
    let rows: Vec<Vec<String>> = path
        .samples
        .iter()
        .map(|s| {
            let mut row = vec![fmt_f64(s.lambda)];
            row.extend(s.beta.iter().map(|b| fmt_f64(*b)));
            if flagged {
                row.push(if s.degenerate == Some(true) { "1" } else { "0" }.into());
            }
            row
        })
        .collect();
    write_records(out, &header, &rows)
}

pub fn read_path<R: Read>(input: R, method: Method) -> Result<RegularizationPath> {
    let table = read_numeric(input, true)?;
    let header = table.header.unwrap_or_default();
    if header.first().map(String::as_str) != Some("lambda") {
        return Err(Error::Csv("path file must start with a lambda column".into()));
    }
    let flagged = header.last().map(String::as_str) == Some("degenerate");
    let p = header.len() - 1 - flagged as usize;
    let samples = table
        .rows
        .into_iter()
        .map(|r| PathSample {
            lambda: r[0],
            beta: r[1..=p].to_vec(),
            degenerate: flagged.then(|| r[p + 1] != 0.0),
        })
        .collect();
    let interpolation = match method {
        Method::Lasso => Interpolation::PiecewiseLinear,
        _ => Interpolation::GridOnly,
    };
    Ok(RegularizationPath {
        method,
        interpolation,
        samples,
        step_eps: None,
    })
}
