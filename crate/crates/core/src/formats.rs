//! Text formats: point clouds and frame files.
//!
//! A point cloud has one point per line,
//!
//! ```text
//! n m s field Z... V... W...
//! ```
//!
//! with `field` either `real` or `complex`. Complex `Z_k` are written as
//! `re im` pairs, each `V_l`, `W_l` as its `n` coefficients. Floats are
//! printed with 17 significant digits, which round-trips every `f64`
//! exactly.
//!
//! A frame file has one frame vector per line, `n` whitespace-separated
//! reals. Blank lines and lines starting with `#` are skipped.

use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{AlgebraDim, AlgebraElement};
use crate::simplex::{LambdaFrame, SimplexError};
use crate::variety::{Field, PointY, VarietySpec};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Simplex(#[from] SimplexError),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

/// One parsed point-cloud line.
#[derive(Debug, Clone, PartialEq)]
pub struct CloudRecord {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub field: Field,
    pub point: PointY,
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render `p` as a single line (without the trailing newline).
pub fn format_point(spec: &VarietySpec, p: &PointY) -> String {
    let mut parts =
        vec![spec.n().to_string(), spec.m().to_string(), spec.s().to_string(), spec.field().as_str().to_string()];
    for z in &p.z {
        parts.push(format_float(z.re));
        if spec.field() == Field::Complex {
            parts.push(format_float(z.im));
        }
    }
    for e in p.v.iter().chain(&p.w) {
        parts.extend(e.coeffs().iter().map(|&c| format_float(c)));
    }
    parts.join(" ")
}

pub fn write_cloud<W: Write>(mut out: W, spec: &VarietySpec, points: &[PointY]) -> std::io::Result<()> {
    for p in points {
        writeln!(out, "{}", format_point(spec, p))?;
    }
    out.flush()
}

/// Parse one line; `line_no` is used in error messages only.
pub fn parse_point(line: &str, line_no: usize) -> Result<CloudRecord, FormatError> {
    let mut tokens = line.split_whitespace();
    let mut header =
        |what: &str| tokens.next().ok_or_else(|| parse_err(line_no, format!("missing {what}"))).map(str::to_string);
    let int = |tok: String, what: &str| {
        tok.parse::<usize>().map_err(|_| parse_err(line_no, format!("invalid {what} '{tok}'")))
    };
    let n = int(header("n")?, "n")?;
    let m = int(header("m")?, "m")?;
    let s = int(header("s")?, "s")?;
    let field_tok = header("field")?;
    let field: Field = field_tok.parse().map_err(|_| parse_err(line_no, format!("invalid field '{field_tok}'")))?;
    let dim = AlgebraDim::new(n).map_err(|e| parse_err(line_no, e.to_string()))?;

    let values = tokens
        .map(|t| t.parse::<f64>().map_err(|_| parse_err(line_no, format!("invalid number '{t}'"))))
        .collect::<Result<Vec<f64>, _>>()?;
    let expected = m * field.width() + 2 * s * n;
    if values.len() != expected {
        return Err(parse_err(line_no, format!("expected {expected} coordinates, got {}", values.len())));
    }
    let (zs, rest) = values.split_at(m * field.width());
    let z = match field {
        Field::Real => zs.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        Field::Complex => zs.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect(),
    };
    let elems: Vec<AlgebraElement> =
        rest.chunks(n).map(|c| AlgebraElement::from_slice(dim, c).expect("chunk of length n")).collect();
    let (v, w) = elems.split_at(s);
    Ok(CloudRecord { n, m, s, field, point: PointY { z, v: v.to_vec(), w: w.to_vec() } })
}

pub fn read_cloud<R: BufRead>(input: R) -> Result<Vec<CloudRecord>, FormatError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_point(&line, i + 1)?);
    }
    Ok(out)
}

pub fn parse_frame(text: &str, dim: AlgebraDim) -> Result<LambdaFrame, FormatError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| parse_err(i + 1, format!("invalid number '{t}'"))))
            .collect::<Result<Vec<f64>, _>>()?;
        if row.len() != dim.get() {
            return Err(parse_err(i + 1, format!("expected {} reals, got {}", dim.get(), row.len())));
        }
        rows.push(row);
    }
    Ok(LambdaFrame::from_rows(dim, &rows)?)
}

pub fn load_frame(path: &Path, dim: AlgebraDim) -> Result<LambdaFrame, FormatError> {
    parse_frame(&std::fs::read_to_string(path)?, dim)
}
