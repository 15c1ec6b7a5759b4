//! Reader for the IDX files that MNIST ships in (uncompressed, unsigned
//! bytes only).

use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Decoded IDX tensor flattened to one row per leading index.
#[derive(Debug, Clone, PartialEq)]
pub struct IdxData {
    pub dims: Vec<usize>,
    pub values: Matrix,
}

/// Parses an unsigned-byte IDX buffer. With `unit_scale` every value is
/// divided by 255.
pub fn parse_idx(bytes: &[u8], unit_scale: bool) -> Result<IdxData> {
    if bytes.len() < 4 || bytes[0] != 0 || bytes[1] != 0 {
        return Err(Error::Format("not an IDX file (bad magic number)".into()));
    }
    if bytes[2] != 0x08 {
        return Err(Error::Format(format!(
            "IDX element type 0x{:02x} is not supported (unsigned bytes only)",
            bytes[2]
        )));
    }
    let ndims = bytes[3] as usize;
    if ndims == 0 {
        return Err(Error::Format("IDX file declares zero dimensions".into()));
    }
    let header = 4 + 4 * ndims;
    if bytes.len() < header {
        return Err(Error::Format("IDX header is truncated".into()));
    }
    let dims: Vec<usize> = bytes[4..header]
        .chunks_exact(4)
        .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]) as usize)
        .collect();
    let rows = dims[0];
    let cols: usize = dims[1..].iter().product();
    let payload = &bytes[header..];
    if payload.len() != rows * cols {
        return Err(Error::Format(format!(
            "IDX payload has {} bytes, header promises {}",
            payload.len(),
            rows * cols
        )));
    }
    let scale = if unit_scale { 1.0 / 255.0 } else { 1.0 };
    let values = Matrix::from_row_iterator(rows, cols, payload.iter().map(|&b| b as f64 * scale));
    Ok(IdxData { dims, values })
}

pub fn read_idx(path: &Path, unit_scale: bool) -> Result<IdxData> {
    parse_idx(&std::fs::read(path)?, unit_scale)
}
