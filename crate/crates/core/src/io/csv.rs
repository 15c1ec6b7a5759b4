//! Numeric CSV input and output.
//!
//! A single header row is accepted when any field of the first record fails
//! to parse as a number.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Parsed numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Option<Vec<String>>,
    pub data: Matrix,
}

fn parse_field(field: &str, line: u64) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::Format(format!("line {line}: `{field}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Format(format!(
            "line {line}: non-finite value `{field}`"
        )));
    }
    Ok(v)
}

pub fn parse_csv<R: Read>(input: R) -> Result<Table> {
    let mut reader = ::csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(::csv::Trim::All)
        .from_reader(input);
    let mut header = None;
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0usize;
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Format(format!("malformed CSV: {e}")))?;
        let line = record.position().map_or(idx as u64 + 1, |p| p.line());
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if idx == 0 && record.iter().any(|f| f.parse::<f64>().is_err()) {
            header = Some(record.iter().map(str::to_owned).collect());
            cols = Some(record.len());
            continue;
        }
        match cols {
            Some(c) if c != record.len() => {
                return Err(Error::Format(format!(
                    "line {line}: expected {c} fields, found {}",
                    record.len()
                )))
            }
            _ => cols = Some(record.len()),
        }
        for field in record.iter() {
            values.push(parse_field(field, line)?);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::Format("CSV input has no data rows".into()));
    }
    let cols = cols.unwrap_or(0);
    Ok(Table {
        header,
        data: Matrix::from_row_slice(rows, cols, &values),
    })
}

pub fn read_csv(path: &Path) -> Result<Table> {
    let file = File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    parse_csv(std::io::BufReader::new(file))
}

/// Reads a numeric matrix, discarding any header.
pub fn read_matrix(path: &Path) -> Result<Matrix> {
    Ok(read_csv(path)?.data)
}

/// Reads a single column of non-negative integer labels.
pub fn read_labels(path: &Path) -> Result<Vec<usize>> {
    let m = read_matrix(path)?;
    if m.ncols() != 1 {
        return Err(Error::Format(format!(
            "label file has {} columns, expected 1",
            m.ncols()
        )));
    }
    m.iter()
        .map(|&v| {
            if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as usize)
            } else {
                Err(Error::Format(format!(
                    "label {v} is not a non-negative integer"
                )))
            }
        })
        .collect()
}

/// Writes one row per line with 17 significant digits per value.
pub fn write_csv<W: Write>(
    m: &Matrix,
    header: Option<&[String]>,
    mut out: W,
) -> std::io::Result<()> {
    if let Some(h) = header {
        writeln!(out, "{}", h.join(","))?;
    }
    let mut line = String::new();
    for row in m.row_iter() {
        line.clear();
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&format!("{v:.16e}"));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn write_matrix(path: &Path, m: &Matrix, header: Option<&[String]>) -> Result<()> {
    let mut out = std::io::BufWriter::new(File::create(path)?);
    write_csv(m, header, &mut out)?;
    out.flush()?;
    Ok(())
}
