//! Plain-text matrix format.
//!
//! ```text
//! m n
//! <n characters of 0/1>   (m lines)
//! ```
//!
//! Character `j` of a row is coordinate `j`. Every line, the last included,
//! ends with `\n`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, EchelonBasis};

pub fn write_matrix(m: &BitMatrix) -> String {
    let mut out = String::with_capacity((m.col_count() + 1) * (m.row_count() + 1));
    let _ = writeln!(out, "{} {}", m.row_count(), m.col_count());
    for r in m.rows() {
        let _ = writeln!(out, "{r}");
    }
    out
}

pub fn write_basis(b: &EchelonBasis) -> String {
    let mut out = format!("{} {}\n", b.dim(), b.n());
    for r in b.rows() {
        let _ = writeln!(out, "{r}");
    }
    out
}

fn format_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { line, msg: msg.into() }
}

pub fn parse_matrix(text: &str) -> Result<BitMatrix> {
    if !text.ends_with('\n') {
        return Err(format_err(text.lines().count().max(1), "missing trailing newline"));
    }
    let mut lines = text[..text.len() - 1].split('\n');
    let header = lines.next().unwrap_or("");
    let mut fields = header.split(' ');
    let (Some(m), Some(n), None) = (fields.next(), fields.next(), fields.next()) else {
        return Err(format_err(1, "header must be `m n`"));
    };
    let m: usize = m.parse().map_err(|_| format_err(1, format!("bad row count {m:?}")))?;
    let n: usize = n.parse().map_err(|_| format_err(1, format!("bad column count {n:?}")))?;
    if n == 0 || n > crate::gf2::MAX_LEN {
        return Err(format_err(1, format!("column count {n} unsupported")));
    }

    let mut rows = Vec::with_capacity(m);
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        if rows.len() == m {
            return Err(format_err(lineno, format!("expected {m} rows, found more")));
        }
        if line.len() != n {
            return Err(format_err(lineno, format!("expected {n} characters, found {}", line.len())));
        }
        let mut row = BitVector::zeros(n)?;
        for (j, c) in line.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => row.set(j, true),
                _ => return Err(format_err(lineno, format!("invalid character {:?}", c as char))),
            }
        }
        rows.push(row);
    }
    if rows.len() != m {
        return Err(format_err(rows.len() + 2, format!("expected {m} rows, found {}", rows.len())));
    }
    BitMatrix::new(n, rows)
}

/// Reads a matrix and echelonizes its rows.
pub fn parse_basis(text: &str) -> Result<EchelonBasis> {
    Ok(parse_matrix(text)?.row_space())
}
