//! Matrix interchange.
//!
//! Text: a `rows cols` header, then `rows·cols` row-major `re im` pairs,
//! whitespace separated, printed with 17 significant digits so values
//! round-trip exactly. Binary: magic `TWC1`, rows and cols as little-endian
//! `u64`, then row-major little-endian `f64` pairs. Readers detect the format
//! from the first four bytes.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{c64, DenseMatrix};

pub const MAGIC: &[u8; 4] = b"TWC1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Text,
    Binary,
}

/// Formats `x` with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        // keep the sign of negative zero out of the files
        return "0".into();
    }
    format!("{x:.16e}")
}

pub fn to_text(m: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", m.nrows(), m.ncols());
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|c| format!("{} {}", format_f64(m[(r, c)].re), format_f64(m[(r, c)].im)))
            .collect();
        out.push_str(&row.join("  "));
        out.push('\n');
    }
    out
}

pub fn to_binary(m: &DenseMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(20 + 16 * m.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(m.nrows() as u64).to_le_bytes());
    out.extend_from_slice(&(m.ncols() as u64).to_le_bytes());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.extend_from_slice(&m[(r, c)].re.to_le_bytes());
            out.extend_from_slice(&m[(r, c)].im.to_le_bytes());
        }
    }
    out
}

fn parse_error(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn from_text(text: &str) -> Result<DenseMatrix> {
    let mut tokens = text.split_whitespace();
    let mut dim = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| parse_error(format!("missing {what} in header")))?
            .parse()
            .map_err(|e| parse_error(format!("bad {what}: {e}")))
    };
    let (rows, cols) = (dim("rows")?, dim("cols")?);
    let values: Vec<f64> = tokens
        .map(|t| t.parse::<f64>().map_err(|e| parse_error(format!("bad number {t:?}: {e}"))))
        .collect::<Result<_>>()?;
    if values.len() != 2 * rows * cols {
        return Err(parse_error(format!("expected {} numbers for {rows}x{cols}, found {}", 2 * rows * cols, values.len())));
    }
    let entries: Vec<c64> = values.chunks_exact(2).map(|p| c64::new(p[0], p[1])).collect();
    Ok(DenseMatrix::from_row_slice(rows, cols, &entries))
}

pub fn from_binary(bytes: &[u8]) -> Result<DenseMatrix> {
    if bytes.len() < 20 || &bytes[..4] != MAGIC {
        return Err(parse_error("missing TWC1 header"));
    }
    let word = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().expect("8 bytes"));
    let (rows, cols) = (word(4) as usize, word(12) as usize);
    let expected = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(16))
        .ok_or_else(|| parse_error("dimensions overflow"))?;
    let body = &bytes[20..];
    if body.len() != expected {
        return Err(parse_error(format!("expected {expected} payload bytes for {rows}x{cols}, found {}", body.len())));
    }
    let entries: Vec<c64> = body
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            c64::new(re, im)
        })
        .collect();
    Ok(DenseMatrix::from_row_slice(rows, cols, &entries))
}

/// Parses either format.
pub fn from_bytes(bytes: &[u8]) -> Result<DenseMatrix> {
    if bytes.starts_with(MAGIC) {
        return from_binary(bytes);
    }
    let text = std::str::from_utf8(bytes).map_err(|_| parse_error("neither TWC1 binary nor UTF-8 text"))?;
    from_text(text)
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    let bytes = fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    from_bytes(&bytes).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_matrix(path: &Path, m: &DenseMatrix, format: MatrixFormat) -> Result<()> {
    let bytes = match format {
        MatrixFormat::Text => to_text(m).into_bytes(),
        MatrixFormat::Binary => to_binary(m),
    };
    let mut f = fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    f.write_all(&bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
