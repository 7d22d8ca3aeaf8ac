//! Dense row-major node embedding tables and their text format.
//!
//! The text format is a `node_count dim` header followed by one
//! `label f1 .. fd` line per node, reals printed to 6 significant digits.

use std::io::{self, Write};

use crate::error::{parse_err, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    rows: usize,
    dim: usize,
    data: Vec<f64>,
}

impl EmbeddingMatrix {
    pub fn zeros(rows: usize, dim: usize) -> Self {
        EmbeddingMatrix {
            rows,
            dim,
            data: vec![0.0; rows * dim],
        }
    }

    pub fn from_vec(rows: usize, dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * dim {
            return Err(Error::SizeMismatch {
                expected: rows * dim,
                actual: data.len(),
            });
        }
        Ok(EmbeddingMatrix { rows, dim, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Side-by-side concatenation of matrices with equal row counts.
    pub fn hstack(parts: &[&EmbeddingMatrix]) -> Result<Self> {
        let rows = parts.first().map_or(0, |m| m.rows);
        if let Some(bad) = parts.iter().find(|m| m.rows != rows) {
            return Err(Error::SizeMismatch {
                expected: rows,
                actual: bad.rows,
            });
        }
        let dim = parts.iter().map(|m| m.dim).sum();
        let mut data = Vec::with_capacity(rows * dim);
        for i in 0..rows {
            for m in parts {
                data.extend_from_slice(m.row(i));
            }
        }
        Ok(EmbeddingMatrix { rows, dim, data })
    }

    /// Writes the text format. Without `labels`, rows are named by index.
    pub fn write_text<W: Write>(&self, mut out: W, labels: Option<&[String]>) -> io::Result<()> {
        writeln!(out, "{} {}", self.rows, self.dim)?;
        let mut line = String::new();
        for i in 0..self.rows {
            line.clear();
            match labels {
                Some(l) => line.push_str(&l[i]),
                None => line.push_str(&i.to_string()),
            }
            for &x in self.row(i) {
                line.push(' ');
                line.push_str(&format_sig6(x));
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Parses the text format, returning row labels alongside the matrix.
    pub fn read_text(text: &str) -> Result<(Vec<String>, EmbeddingMatrix)> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (idx, header) = lines.next().ok_or(Error::EmptyInput)?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [rows, dim] = fields.as_slice() else {
            return Err(parse_err(idx + 1, "header must be `node_count dim`"));
        };
        let rows: usize = rows
            .parse()
            .map_err(|_| parse_err(idx + 1, "node count is not an integer"))?;
        let dim: usize = dim
            .parse()
            .map_err(|_| parse_err(idx + 1, "dimension is not an integer"))?;

        let mut labels = Vec::new();
        let mut data = Vec::new();
        for (idx, raw) in lines {
            let line = idx + 1;
            if labels.len() == rows {
                return Err(parse_err(line, format!("more than {rows} rows")));
            }
            let mut tokens = raw.split_whitespace();
            let label = tokens.next().unwrap();
            let before = data.len();
            for tok in tokens {
                let x: f64 = tok
                    .parse()
                    .map_err(|_| parse_err(line, format!("`{tok}` is not a number")))?;
                if !x.is_finite() {
                    return Err(parse_err(line, format!("`{tok}` is not finite")));
                }
                data.push(x);
            }
            if data.len() - before != dim {
                return Err(parse_err(
                    line,
                    format!("expected {dim} values, found {}", data.len() - before),
                ));
            }
            labels.push(label.to_owned());
        }
        if labels.len() != rows {
            return Err(Error::SizeMismatch {
                expected: rows,
                actual: labels.len(),
            });
        }
        Ok((labels, EmbeddingMatrix { rows, dim, data }))
    }
}

/// `%g`-style formatting with 6 significant digits.
fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    let exp = x.abs().log10().floor() as i32;
    // Rounding can bump the exponent (9.999996 -> 10.0000); re-check after.
    let sci = format!("{x:.5e}");
    let (mantissa, e) = sci.split_once('e').unwrap();
    let e: i32 = e.parse().unwrap_or(exp);
    if (-5..6).contains(&e) {
        let decimals = (5 - e).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed).to_owned()
    } else {
        format!("{}e{e}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
