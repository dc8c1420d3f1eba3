//! Text formats.
//!
//! Readings file: one record per line, `readout_id,peak,real,imag`. Lines
//! starting with `#` are comments; `# key=value` comments carry metadata
//! (`noise_sigma`, `seed`, `source`).
//!
//! Density file: four lines of four whitespace-separated complex literals
//! such as `0.31`, `-0.063-0.13i` or `0.5i`.
//!
//! Floats are written in shortest round-trip decimal form, so write → parse
//! is bit-exact.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::model::{Peak, Reading, ReadoutId};

/// Default Hermiticity tolerance for density files.
pub const DEFAULT_HERMITIAN_TOL: f64 = 1e-6;
/// Violations up to this size only produce a warning (rounded printed
/// matrices land here).
pub const HERMITIAN_WARN_LIMIT: f64 = 1e-2;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReadingsMetadata {
    pub noise_sigma: Option<f64>,
    pub seed: Option<u64>,
    pub source: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReadingsFile {
    pub metadata: ReadingsMetadata,
    pub readings: Vec<Reading>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_f64(s: &str, line: usize, what: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} {s:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite {what} {s:?}")));
    }
    Ok(v)
}

pub fn parse_readings(text: &str) -> Result<ReadingsFile> {
    let mut file = ReadingsFile::default();
    let mut seen = std::collections::HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.trim().split_once('=') {
                let value = value.trim();
                match key.trim() {
                    "noise_sigma" => {
                        file.metadata.noise_sigma = Some(parse_f64(value, line_no, "noise_sigma")?)
                    }
                    "seed" => {
                        file.metadata.seed =
                            Some(value.parse().map_err(|_| {
                                parse_err(line_no, format!("invalid seed {value:?}"))
                            })?)
                    }
                    "source" => file.metadata.source = Some(value.to_string()),
                    _ => {}
                }
            }
            continue;
        }

        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(parse_err(
                line_no,
                format!(
                    "expected `readout_id,peak,real,imag`, got {} fields",
                    fields.len()
                ),
            ));
        }
        let id: i64 = fields[0]
            .parse()
            .map_err(|_| parse_err(line_no, format!("invalid readout id {:?}", fields[0])))?;
        let readout = ReadoutId::new(id).map_err(|e| parse_err(line_no, e.to_string()))?;
        let peak: Peak = fields[1]
            .parse()
            .map_err(|e: String| parse_err(line_no, e))?;
        let value = Complex64::new(
            parse_f64(fields[2], line_no, "real part")?,
            parse_f64(fields[3], line_no, "imaginary part")?,
        );
        if !seen.insert((readout, peak)) {
            return Err(parse_err(
                line_no,
                format!("duplicate reading for read-out {readout} {peak} peak"),
            ));
        }
        file.readings.push(Reading {
            readout,
            peak,
            value,
        });
    }
    Ok(file)
}

pub fn write_readings(file: &ReadingsFile) -> String {
    let mut out = String::from("# readout_id,peak,real,imag\n");
    let meta = &file.metadata;
    if let Some(s) = meta.noise_sigma {
        writeln!(out, "# noise_sigma={s}").unwrap();
    }
    if let Some(s) = meta.seed {
        writeln!(out, "# seed={s}").unwrap();
    }
    if let Some(s) = &meta.source {
        writeln!(out, "# source={s}").unwrap();
    }
    for r in &file.readings {
        writeln!(
            out,
            "{},{},{},{}",
            r.readout, r.peak, r.value.re, r.value.im
        )
        .unwrap();
    }
    out
}

/// Parses one complex literal: `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`).
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let bad = || format!("unparseable complex literal {s:?}");
    let num = |t: &str| -> std::result::Result<f64, String> {
        let v: f64 = t.parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(num(s)?, 0.0));
    };
    // split before the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => num(t),
    };
    match split {
        Some(k) => Ok(Complex64::new(num(&body[..k])?, imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

#[derive(Debug, Clone)]
pub struct ParsedDensity {
    pub matrix: ComplexMatrix,
    /// Largest `|M[i][j] − conj(M[j][i])|`.
    pub hermitian_violation: f64,
    /// Set when the violation exceeds the tolerance but not the warning limit.
    pub warning: Option<String>,
}

/// Parses a 4×4 density file. Hermiticity violations up to `tol` pass
/// silently, up to `max(tol, 1e-2)` with a warning, and error above that.
pub fn parse_density(text: &str, tol: f64) -> Result<ParsedDensity> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| parse_complex(t).map_err(|m| parse_err(idx + 1, m)))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != 4 {
            return Err(Error::Shape(format!(
                "line {}: expected 4 entries, got {}",
                idx + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != 4 {
        return Err(Error::Shape(format!(
            "density file must have 4 rows, got {}",
            rows.len()
        )));
    }
    let matrix = ComplexMatrix::from_rows(&rows)?;
    let (violation, i, j) = matrix.hermitian_violation();
    let mut warning = None;
    if violation > tol {
        if violation > tol.max(HERMITIAN_WARN_LIMIT) {
            return Err(Error::NotHermitian {
                row: i + 1,
                col: j + 1,
                diff: violation,
            });
        }
        warning = Some(format!(
            "matrix is Hermitian only to {violation:.3e} (elements ({},{}) and ({},{}))",
            i + 1,
            j + 1,
            j + 1,
            i + 1
        ));
    }
    Ok(ParsedDensity {
        matrix,
        hermitian_violation: violation,
        warning,
    })
}

pub fn write_density(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|&z| format_complex(z)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Fixed 10-significant-digit scientific formatting used for CSV output.
pub fn fmt_sig(x: f64) -> String {
    // normalise -0 so identical values always print identically
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.9e}")
}
