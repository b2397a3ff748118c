//! Matrix exchange: Matrix Market (coordinate and array) and a JSON form
//! `{"rows": m, "cols": n, "data": [[re, im], ...]}` with row-major data.
//!
//! Floats are written in shortest round-trip form, so read–write–read is
//! bit-exact at whatever decimal precision the file carries.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matrix::{cx, is_finite, Matrix};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad Matrix Market banner: {0}")]
    BadBanner(String),
    #[error("unsupported Matrix Market declaration: {0}")]
    Unsupported(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("entry ({i}, {j}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        rows: usize,
        cols: usize,
    },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("declared {declared} entries but found {found}")]
    CountMismatch { declared: usize, found: usize },
    #[error("bad JSON matrix: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad matrix data: {0}")]
    BadData(String),
    #[error("file format not recognized (expected Matrix Market or JSON)")]
    UnknownFormat,
}

/// Which Matrix Market layout to write.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmLayout {
    /// Sparse triplets, one line per stored nonzero.
    Coordinate,
    /// Dense column-major listing.
    Array,
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    data: Vec<(f64, f64)>,
}

/// Parse a matrix from Matrix Market text.
pub fn parse_matrix_market(text: &str) -> Result<Matrix, IoError> {
    let mut lines = text.lines().enumerate();
    let (_, banner) = lines
        .next()
        .ok_or_else(|| IoError::BadBanner("empty file".into()))?;
    let fields: Vec<String> = banner.split_whitespace().map(|s| s.to_lowercase()).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(IoError::BadBanner(banner.to_string()));
    }
    let layout = match fields[2].as_str() {
        "coordinate" => MmLayout::Coordinate,
        "array" => MmLayout::Array,
        other => return Err(IoError::Unsupported(format!("format `{other}`"))),
    };
    let field = fields[3].clone();
    if !matches!(field.as_str(), "real" | "integer" | "complex") {
        return Err(IoError::Unsupported(format!("field `{field}`")));
    }
    let symmetry = fields[4].clone();
    if !matches!(
        symmetry.as_str(),
        "general" | "symmetric" | "hermitian" | "skew-symmetric"
    ) {
        return Err(IoError::Unsupported(format!("symmetry `{symmetry}`")));
    }

    let mut data_lines = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });

    let (size_lineno, size_line) = data_lines
        .next()
        .ok_or_else(|| IoError::Parse {
            line: 0,
            message: "missing size line".into(),
        })?;
    let sizes: Vec<usize> = size_line
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| IoError::Parse {
                line: size_lineno + 1,
                message: format!("bad size token `{t}`"),
            })
        })
        .collect::<Result<_, _>>()?;

    let parse_value = |tokens: &[&str], lineno: usize| -> Result<Complex64, IoError> {
        let bad = || IoError::Parse {
            line: lineno + 1,
            message: "bad numeric value".into(),
        };
        match (field.as_str(), tokens.len()) {
            ("complex", 2) => {
                let re: f64 = tokens[0].parse().map_err(|_| bad())?;
                let im: f64 = tokens[1].parse().map_err(|_| bad())?;
                Ok(cx(re, im))
            }
            ("real", 1) | ("integer", 1) => {
                let re: f64 = tokens[0].parse().map_err(|_| bad())?;
                Ok(cx(re, 0.0))
            }
            _ => Err(bad()),
        }
    };

    let matrix = match layout {
        MmLayout::Coordinate => {
            if sizes.len() != 3 {
                return Err(IoError::Parse {
                    line: size_lineno + 1,
                    message: "coordinate size line must be `rows cols nnz`".into(),
                });
            }
            let (rows, cols, nnz) = (sizes[0], sizes[1], sizes[2]);
            if rows == 0 || cols == 0 {
                return Err(IoError::BadData("matrix dimensions must be positive".into()));
            }
            let mut m = Matrix::zeros(rows, cols);
            let mut found = 0usize;
            for (lineno, line) in data_lines {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                if tokens.len() < 2 {
                    return Err(IoError::Parse {
                        line: lineno + 1,
                        message: "expected `i j value`".into(),
                    });
                }
                let i: usize = tokens[0].parse().map_err(|_| IoError::Parse {
                    line: lineno + 1,
                    message: "bad row index".into(),
                })?;
                let j: usize = tokens[1].parse().map_err(|_| IoError::Parse {
                    line: lineno + 1,
                    message: "bad column index".into(),
                })?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(IoError::IndexOutOfRange { i, j, rows, cols });
                }
                let v = parse_value(&tokens[2..], lineno)?;
                m[(i - 1, j - 1)] = v;
                match symmetry.as_str() {
                    "symmetric" if i != j => m[(j - 1, i - 1)] = v,
                    "hermitian" if i != j => m[(j - 1, i - 1)] = v.conj(),
                    "skew-symmetric" if i != j => m[(j - 1, i - 1)] = -v,
                    _ => {}
                }
                found += 1;
            }
            if found != nnz {
                return Err(IoError::CountMismatch {
                    declared: nnz,
                    found,
                });
            }
            m
        }
        MmLayout::Array => {
            if sizes.len() != 2 {
                return Err(IoError::Parse {
                    line: size_lineno + 1,
                    message: "array size line must be `rows cols`".into(),
                });
            }
            let (rows, cols) = (sizes[0], sizes[1]);
            if rows == 0 || cols == 0 {
                return Err(IoError::BadData("matrix dimensions must be positive".into()));
            }
            if symmetry != "general" {
                return Err(IoError::Unsupported(
                    "array layout is only supported with general symmetry".into(),
                ));
            }
            let mut values = Vec::with_capacity(rows * cols);
            for (lineno, line) in data_lines {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                values.push(parse_value(&tokens, lineno)?);
            }
            if values.len() != rows * cols {
                return Err(IoError::CountMismatch {
                    declared: rows * cols,
                    found: values.len(),
                });
            }
            // column-major listing
            Matrix::from_fn(rows, cols, |i, j| values[j * rows + i])
        }
    };
    if !is_finite(&matrix) {
        return Err(IoError::NonFinite);
    }
    Ok(matrix)
}

fn fmt_f64(x: f64) -> String {
    // shortest representation that round-trips
    format!("{x:?}")
}

/// Render a matrix as Matrix Market text. The field is `real` when every
/// entry has zero imaginary part, `complex` otherwise; symmetry is always
/// written as `general`.
pub fn write_matrix_market(m: &Matrix, layout: MmLayout) -> String {
    let complex = m.iter().any(|z| z.im != 0.0);
    let field = if complex { "complex" } else { "real" };
    let mut out = String::new();
    match layout {
        MmLayout::Coordinate => {
            let nnz = m.iter().filter(|z| **z != cx(0.0, 0.0)).count();
            let _ = writeln!(out, "%%MatrixMarket matrix coordinate {field} general");
            let _ = writeln!(out, "{} {} {}", m.nrows(), m.ncols(), nnz);
            for j in 0..m.ncols() {
                for i in 0..m.nrows() {
                    let z = m[(i, j)];
                    if z == cx(0.0, 0.0) {
                        continue;
                    }
                    if complex {
                        let _ = writeln!(
                            out,
                            "{} {} {} {}",
                            i + 1,
                            j + 1,
                            fmt_f64(z.re),
                            fmt_f64(z.im)
                        );
                    } else {
                        let _ = writeln!(out, "{} {} {}", i + 1, j + 1, fmt_f64(z.re));
                    }
                }
            }
        }
        MmLayout::Array => {
            let _ = writeln!(out, "%%MatrixMarket matrix array {field} general");
            let _ = writeln!(out, "{} {}", m.nrows(), m.ncols());
            for j in 0..m.ncols() {
                for i in 0..m.nrows() {
                    let z = m[(i, j)];
                    if complex {
                        let _ = writeln!(out, "{} {}", fmt_f64(z.re), fmt_f64(z.im));
                    } else {
                        let _ = writeln!(out, "{}", fmt_f64(z.re));
                    }
                }
            }
        }
    }
    out
}

/// Parse the JSON matrix form.
pub fn parse_json(text: &str) -> Result<Matrix, IoError> {
    let j: JsonMatrix = serde_json::from_str(text)?;
    if j.rows == 0 || j.cols == 0 {
        return Err(IoError::BadData("matrix dimensions must be positive".into()));
    }
    if j.data.len() != j.rows * j.cols {
        return Err(IoError::CountMismatch {
            declared: j.rows * j.cols,
            found: j.data.len(),
        });
    }
    let m = Matrix::from_fn(j.rows, j.cols, |i, jx| {
        let (re, im) = j.data[i * j.cols + jx];
        cx(re, im)
    });
    if !is_finite(&m) {
        return Err(IoError::NonFinite);
    }
    Ok(m)
}

/// Render the JSON matrix form (row-major data).
pub fn write_json(m: &Matrix) -> String {
    let data: Vec<(f64, f64)> = (0..m.nrows())
        .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
        .map(|(i, j)| {
            let z = m[(i, j)];
            (z.re, z.im)
        })
        .collect();
    serde_json::to_string(&JsonMatrix {
        rows: m.nrows(),
        cols: m.ncols(),
        data,
    })
    .expect("json serialization of plain floats cannot fail")
}

/// Parse matrix text, sniffing the format from the content.
pub fn parse_auto(text: &str) -> Result<Matrix, IoError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with("%%MatrixMarket") || trimmed.starts_with("%%matrixmarket") {
        parse_matrix_market(text)
    } else if trimmed.starts_with('{') {
        parse_json(text)
    } else {
        Err(IoError::UnknownFormat)
    }
}

/// Read a matrix file (Matrix Market or JSON, sniffed from content).
pub fn read_matrix_file(path: &Path) -> Result<Matrix, IoError> {
    let text = fs::read_to_string(path)?;
    parse_auto(&text)
}

/// Write a matrix file; the format follows the extension (`.json` gives the
/// JSON form, everything else Matrix Market coordinate).
pub fn write_matrix_file(path: &Path, m: &Matrix) -> Result<(), IoError> {
    let text = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => write_json(m),
        _ => write_matrix_market(m, MmLayout::Coordinate),
    };
    fs::write(path, text)?;
    Ok(())
}
