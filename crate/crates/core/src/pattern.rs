//! Nonzero patterns.
//!
//! A [`Pattern`] records which entries of a matrix are nonzero (`*`) and
//! which are zero (`o`). Every matrix of a given pattern shares the same zero
//! locations; the actual values are unknown.
//!
//! Text format: one row per line, whitespace-separated tokens. `*` marks a
//! nonzero, `o`, `0` or `.` a zero. Blank lines and lines starting with `#`
//! are skipped. A row of width zero is written as a single `-`, so an `n x 0`
//! pattern (a system without inputs) can still be stored in a file.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    rows: usize,
    cols: usize,
    mask: Vec<bool>,
}

impl Pattern {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Pattern {
            rows,
            cols,
            mask: vec![false; rows * cols],
        }
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        Pattern {
            rows,
            cols,
            mask: vec![true; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut p = Pattern::zeros(n, n);
        for i in 0..n {
            p.set(i, i, true);
        }
        p
    }

    /// Builds a pattern from a row-major mask.
    pub fn from_mask(rows: usize, cols: usize, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "mask has {} cells, expected {rows}x{cols}",
                mask.len()
            )));
        }
        Ok(Pattern { rows, cols, mask })
    }

    /// Builds a pattern from zero-based `(row, col)` positions of its nonzeros.
    pub fn from_nonzeros(rows: usize, cols: usize, cells: &[(usize, usize)]) -> Result<Self> {
        let mut p = Pattern::zeros(rows, cols);
        for &(i, j) in cells {
            if i >= rows || j >= cols {
                return Err(Error::Dimension(format!(
                    "cell ({i}, {j}) outside a {rows}x{cols} pattern"
                )));
            }
            p.set(i, j, true);
        }
        Ok(p)
    }

    /// Random pattern where each cell is nonzero with probability `density`.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, density: f64, rng: &mut R) -> Self {
        let mask = (0..rows * cols).map(|_| rng.random_bool(density)).collect();
        Pattern { rows, cols, mask }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(
            i < self.rows && j < self.cols,
            "cell ({i}, {j}) out of bounds"
        );
        self.mask[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, nonzero: bool) {
        assert!(
            i < self.rows && j < self.cols,
            "cell ({i}, {j}) out of bounds"
        );
        self.mask[i * self.cols + j] = nonzero;
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Zero-based positions of the nonzeros in row-major order.
    pub fn nonzeros(&self) -> Vec<(usize, usize)> {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &nz)| nz)
            .map(|(k, _)| (k / self.cols, k % self.cols))
            .collect()
    }

    pub fn nnz(&self) -> usize {
        self.mask.iter().filter(|&&nz| nz).count()
    }

    /// Zero-based rows holding a nonzero in column `j`.
    pub fn column_support(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rows).filter(move |&i| self.get(i, j))
    }

    pub fn transpose(&self) -> Pattern {
        let mut t = Pattern::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Columns of `self` followed by the columns of `other`.
    pub fn hstack(&self, other: &Pattern) -> Result<Pattern> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "cannot concatenate {}x{} and {}x{} side by side",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let cols = self.cols + other.cols;
        let mut mask = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            mask.extend_from_slice(&self.mask[i * self.cols..(i + 1) * self.cols]);
            mask.extend_from_slice(&other.mask[i * other.cols..(i + 1) * other.cols]);
        }
        Ok(Pattern {
            rows: self.rows,
            cols,
            mask,
        })
    }

    /// Splits the columns into `[0, at)` and `[at, cols)`.
    pub fn split_columns(&self, at: usize) -> (Pattern, Pattern) {
        assert!(
            at <= self.cols,
            "split point {at} beyond {} columns",
            self.cols
        );
        let mut left = Pattern::zeros(self.rows, at);
        let mut right = Pattern::zeros(self.rows, self.cols - at);
        for (i, j) in self.nonzeros() {
            if j < at {
                left.set(i, j, true);
            } else {
                right.set(i, j - at, true);
            }
        }
        (left, right)
    }

    /// Pattern of `|X| + |Y|`: the entrywise union of the nonzeros.
    pub fn or_add(&self, other: &Pattern) -> Result<Pattern> {
        if self.dims() != other.dims() {
            return Err(Error::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mask = self
            .mask
            .iter()
            .zip(&other.mask)
            .map(|(&x, &y)| x || y)
            .collect();
        Ok(Pattern {
            rows: self.rows,
            cols: self.cols,
            mask,
        })
    }

    /// The pattern with every diagonal cell set, i.e. `[id] + self`.
    pub fn with_identity(&self) -> Result<Pattern> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "identity augmentation needs a square pattern, got {}x{}",
                self.rows, self.cols
            )));
        }
        self.or_add(&Pattern::identity(self.rows))
    }

    /// Copies `block` into `self` with its top-left cell at `(row, col)`.
    fn place(&mut self, row: usize, col: usize, block: &Pattern) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                if block.get(i, j) {
                    self.set(row + i, col + j, true);
                }
            }
        }
    }

    /// Renders the pattern in the text format, one line per row, no trailing newline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            if i > 0 {
                out.push('\n');
            }
            if self.cols == 0 {
                out.push('-');
                continue;
            }
            for j in 0..self.cols {
                if j > 0 {
                    out.push(' ');
                }
                out.push(if self.get(i, j) { '*' } else { 'o' });
            }
        }
        out
    }
}

/// Parses the text format described in the module docs.
pub fn parse_pattern(text: &str) -> Result<Pattern> {
    let mut rows = 0;
    let mut cols: Option<usize> = None;
    let mut mask = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = if content == "-" {
            Vec::new()
        } else {
            content.split_whitespace().collect()
        };
        match cols {
            None => cols = Some(tokens.len()),
            Some(expected) if expected != tokens.len() => {
                return Err(Error::RaggedRow {
                    line,
                    expected,
                    found: tokens.len(),
                })
            }
            Some(_) => {}
        }
        for token in tokens {
            let nz = match token {
                "*" => true,
                "o" | "0" | "." => false,
                other => {
                    return Err(Error::UnknownToken {
                        line,
                        token: other.to_string(),
                    })
                }
            };
            mask.push(nz);
        }
        rows += 1;
    }
    let cols = cols.ok_or(Error::EmptyPattern)?;
    Ok(Pattern { rows, cols, mask })
}

/// Horizon pattern for discrete-time windows of length `horizon`.
///
/// The result has `n * horizon` rows split into block rows of height `n`,
/// and `(n + r) * horizon` columns: `horizon` state groups of width `n`
/// followed by `horizon` input groups of width `r`. Block row `i` (1-based)
/// holds `a` in state group `i` for `i >= 2` (block row 1 holds zeros there),
/// the identity in state group `i + 1` for `i < horizon`, and `b` in input
/// group `i`.
pub fn build_k(a: &Pattern, b: &Pattern, horizon: usize) -> Result<Pattern> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "state pattern must be square, got {}x{}",
            a.rows, a.cols
        )));
    }
    if a.rows != b.rows {
        return Err(Error::Dimension(format!(
            "state pattern has {} rows but input pattern has {}",
            a.rows, b.rows
        )));
    }
    if horizon == 0 {
        return Err(Error::InvalidHorizon);
    }
    let n = a.rows;
    let r = b.cols;
    let mut k = Pattern::zeros(n * horizon, (n + r) * horizon);
    let id = Pattern::identity(n);
    let input_base = n * horizon;
    for i in 0..horizon {
        let row = i * n;
        if i >= 1 {
            k.place(row, i * n, a);
        }
        if i + 1 < horizon {
            k.place(row, (i + 1) * n, &id);
        }
        k.place(row, input_base + i * r, b);
    }
    Ok(k)
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_pattern(s)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Pattern {}x{}", self.rows, self.cols)?;
        f.write_str(&self.render())
    }
}
