//! Matrix file formats and report serialization.
//!
//! Matrices travel as Matrix Market dense arrays (`%%MatrixMarket matrix
//! array real|complex general`, column-major entries) or as CSV with one
//! row per line. Complex CSV entries use the single-token `a+bi` / `a-bi`
//! syntax. Scalars are written in shortest round-trip decimal form, so
//! read(write(M)) is exact.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, ScalarKind};
use crate::props::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFileFormat {
    MatrixMarketArray,
    Csv,
}

impl std::str::FromStr for MatrixFileFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "matrix-market" | "mm" | "mtx" | "array" => Ok(MatrixFileFormat::MatrixMarketArray),
            "csv" => Ok(MatrixFileFormat::Csv),
            other => Err(Error::InvalidArgument(format!(
                "unknown matrix format {other:?} (expected matrix-market or csv)"
            ))),
        }
    }
}

/// Pick a format from the file extension; Matrix Market unless `.csv`.
pub fn infer_format(path: &Path) -> MatrixFileFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => MatrixFileFormat::Csv,
        _ => MatrixFileFormat::MatrixMarketArray,
    }
}

pub fn read_matrix(path: &Path, format: MatrixFileFormat) -> Result<Matrix> {
    let file = fs::File::open(path)?;
    read_matrix_from(BufReader::new(file), format)
}

pub fn read_matrix_from<R: BufRead>(reader: R, format: MatrixFileFormat) -> Result<Matrix> {
    let mut lines = Vec::new();
    for line in reader.lines() {
        lines.push(line?);
    }
    match format {
        MatrixFileFormat::MatrixMarketArray => parse_matrix_market(&lines),
        MatrixFileFormat::Csv => parse_csv(&lines),
    }
}

pub fn write_matrix(m: &Matrix, path: &Path, format: MatrixFileFormat) -> Result<()> {
    let mut buf = Vec::new();
    write_matrix_to(m, &mut buf, format)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn write_matrix_to<W: Write>(m: &Matrix, out: &mut W, format: MatrixFileFormat) -> Result<()> {
    match format {
        MatrixFileFormat::MatrixMarketArray => {
            let field = match m.kind() {
                ScalarKind::Real => "real",
                ScalarKind::Complex => "complex",
            };
            writeln!(out, "%%MatrixMarket matrix array {field} general")?;
            writeln!(out, "{} {}", m.rows(), m.cols())?;
            for j in 0..m.cols() {
                for i in 0..m.rows() {
                    let z = m.get(i, j);
                    match m.kind() {
                        ScalarKind::Real => writeln!(out, "{}", z.re)?,
                        ScalarKind::Complex => writeln!(out, "{} {}", z.re, z.im)?,
                    }
                }
            }
        }
        MatrixFileFormat::Csv => {
            for i in 0..m.rows() {
                let row: Vec<String> = (0..m.cols())
                    .map(|j| match m.kind() {
                        ScalarKind::Real => format!("{}", m.get(i, j).re),
                        ScalarKind::Complex => format_complex(m.get(i, j)),
                    })
                    .collect();
                writeln!(out, "{}", row.join(","))?;
            }
        }
    }
    Ok(())
}

/// JSON report array with stable key order
/// (`variant`, `seed`, `input_digest`, `checks`).
pub fn write_report(reports: &[VerificationReport], path: &Path) -> Result<()> {
    fs::write(path, report_json(reports)?)?;
    Ok(())
}

pub fn report_json(reports: &[VerificationReport]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(reports)?;
    s.push('\n');
    Ok(s)
}

/// `a+bi` / `a-bi`, no whitespace; sign of a negative zero is preserved.
fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn parse_matrix_market(lines: &[String]) -> Result<Matrix> {
    let banner = lines.first().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let tokens: Vec<String> = banner
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(Error::Parse {
            line: 1,
            msg: "header must start with %%MatrixMarket".into(),
        });
    }
    if tokens.len() != 5 {
        return Err(Error::Parse {
            line: 1,
            msg: format!(
                "header must be '%%MatrixMarket matrix array <field> general', got {banner:?}"
            ),
        });
    }
    if tokens[1] != "matrix" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unsupported object {:?} (expected matrix)", tokens[1]),
        });
    }
    if tokens[2] != "array" {
        return Err(Error::Parse {
            line: 1,
            msg: format!(
                "unsupported format {:?} (only the dense array format is supported)",
                tokens[2]
            ),
        });
    }
    let complex = match tokens[3].as_str() {
        "real" | "integer" => false,
        "complex" => true,
        other => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported field {other:?} (expected real or complex)"),
            })
        }
    };
    if tokens[4] != "general" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unsupported symmetry {:?} (expected general)", tokens[4]),
        });
    }

    // Skip comments and blank lines before the size line.
    let mut idx = 1;
    while idx < lines.len() {
        let l = lines[idx].trim();
        if l.is_empty() || l.starts_with('%') {
            idx += 1;
        } else {
            break;
        }
    }
    let size_line = lines.get(idx).ok_or(Error::Parse {
        line: lines.len(),
        msg: "missing size line".into(),
    })?;
    let dims: Vec<&str> = size_line.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::Parse {
            line: idx + 1,
            msg: format!("size line must hold 'rows cols', got {size_line:?}"),
        });
    }
    let rows: usize = dims[0].parse().map_err(|_| Error::Parse {
        line: idx + 1,
        msg: format!("invalid row count {:?}", dims[0]),
    })?;
    let cols: usize = dims[1].parse().map_err(|_| Error::Parse {
        line: idx + 1,
        msg: format!("invalid column count {:?}", dims[1]),
    })?;
    if rows == 0 || cols == 0 {
        return Err(Error::Parse {
            line: idx + 1,
            msg: "dimensions must be positive".into(),
        });
    }

    // Numeric tokens with their line numbers, column-major order.
    let mut values: Vec<(usize, f64)> = Vec::with_capacity(rows * cols);
    for (offset, raw) in lines[idx + 1..].iter().enumerate() {
        let lineno = idx + 2 + offset;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('%') {
            continue;
        }
        for tok in l.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("non-numeric token {tok:?}"),
            })?;
            values.push((lineno, v));
        }
    }
    let per_entry = if complex { 2 } else { 1 };
    let expected = rows * cols * per_entry;
    if values.len() < expected {
        return Err(Error::Parse {
            line: lines.len(),
            msg: format!(
                "expected {expected} numeric values for a {rows}x{cols} {} array, found {}",
                if complex { "complex" } else { "real" },
                values.len()
            ),
        });
    }
    if values.len() > expected {
        return Err(Error::Parse {
            line: values[expected].0,
            msg: format!("trailing data: expected exactly {expected} numeric values"),
        });
    }

    if complex {
        let mut entries = DMatrix::<Complex64>::zeros(rows, cols);
        for k in 0..rows * cols {
            let (i, j) = (k % rows, k / rows);
            entries[(i, j)] = Complex64::new(values[2 * k].1, values[2 * k + 1].1);
        }
        Matrix::from_complex(entries)
    } else {
        let mut entries = DMatrix::<f64>::zeros(rows, cols);
        for (k, &(_, v)) in values.iter().enumerate() {
            let (i, j) = (k % rows, k / rows);
            entries[(i, j)] = v;
        }
        Matrix::from_real(entries)
    }
}

fn parse_csv(lines: &[String]) -> Result<Matrix> {
    // A trailing newline produces one final empty line; drop only that one.
    let mut rows_raw: &[String] = lines;
    if let Some(last) = rows_raw.last() {
        if last.trim().is_empty() {
            rows_raw = &rows_raw[..rows_raw.len() - 1];
        }
    }
    if rows_raw.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "empty file".into(),
        });
    }

    let mut fields: Vec<Vec<&str>> = Vec::with_capacity(rows_raw.len());
    for (i, raw) in rows_raw.iter().enumerate() {
        if raw.trim().is_empty() {
            return Err(Error::Parse {
                line: i + 1,
                msg: "empty row".into(),
            });
        }
        fields.push(raw.split(',').map(str::trim).collect());
    }
    let cols = fields[0].len();
    for (i, row) in fields.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("ragged row: expected {cols} fields, got {}", row.len()),
            });
        }
    }

    let complex = fields
        .iter()
        .flatten()
        .any(|t| t.ends_with('i') || t.ends_with('I'));
    let rows = fields.len();
    if complex {
        let mut entries = DMatrix::<Complex64>::zeros(rows, cols);
        for (i, row) in fields.iter().enumerate() {
            for (j, tok) in row.iter().enumerate() {
                entries[(i, j)] = parse_complex_token(tok, i + 1, j + 1)?;
            }
        }
        Matrix::from_complex(entries)
    } else {
        let mut entries = DMatrix::<f64>::zeros(rows, cols);
        for (i, row) in fields.iter().enumerate() {
            for (j, tok) in row.iter().enumerate() {
                entries[(i, j)] = tok.parse().map_err(|_| Error::Parse {
                    line: i + 1,
                    msg: format!("invalid number {tok:?} in column {}", j + 1),
                })?;
            }
        }
        Matrix::from_real(entries)
    }
}

/// Parse `a`, `a+bi`, `a-bi`, or `bi`. The split sign is the last `+`/`-`
/// that is neither leading nor part of an exponent.
fn parse_complex_token(token: &str, line: usize, col: usize) -> Result<Complex64> {
    let bad = |msg: String| Error::Parse {
        line,
        msg: format!("{msg} in column {col}"),
    };
    let t = token.trim();
    if !(t.ends_with('i') || t.ends_with('I')) {
        let re: f64 = t
            .parse()
            .map_err(|_| bad(format!("invalid number {t:?}")))?;
        return Ok(Complex64::new(re, 0.0));
    }
    let body = &t[..t.len() - 1];
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        let c = bytes[k];
        if (c == b'+' || c == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    match split {
        Some(k) => {
            let re: f64 = body[..k]
                .parse()
                .map_err(|_| bad(format!("invalid real part in {t:?}")))?;
            let im: f64 = body[k..]
                .parse()
                .map_err(|_| bad(format!("invalid imaginary part in {t:?}")))?;
            Ok(Complex64::new(re, im))
        }
        None => {
            if body.is_empty() {
                return Err(bad(format!("invalid complex token {t:?}")));
            }
            let im: f64 = body
                .parse()
                .map_err(|_| bad(format!("invalid imaginary part in {t:?}")))?;
            Ok(Complex64::new(0.0, im))
        }
    }
}
