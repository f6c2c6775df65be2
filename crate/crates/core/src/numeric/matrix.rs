use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::pattern::Pattern;

/// Default relative pivot tolerance for [`numeric_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Small dense real matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Matrix::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Matrix { rows, cols, data }
    }

    /// Matrix of pattern `p` with `value(i, j)` at every nonzero cell.
    pub fn from_pattern(p: &Pattern, mut value: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(p.rows(), p.cols());
        for (i, j) in p.nonzeros() {
            m[(i, j)] = value(i, j);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Pattern of the exact nonzeros.
    pub fn pattern(&self) -> Pattern {
        Pattern::from_mask(
            self.rows,
            self.cols,
            self.data.iter().map(|&x| x != 0.0).collect(),
        )
        .expect("shape matches")
    }

    /// Whether the zeros of `self` sit exactly where `p` has zeros.
    pub fn is_of_pattern(&self, p: &Pattern) -> bool {
        self.shape() == p.dims() && self.pattern() == *p
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn hstack(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "row mismatch in hstack");
            m.set_block(0, offset, b);
            offset += b.cols;
        }
        m
    }

    pub fn vstack(blocks: &[Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "column mismatch in vstack");
            m.set_block(offset, 0, b);
            offset += b.rows;
        }
        m
    }

    pub fn set_block(&mut self, row: usize, col: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row + i, col + j)] = block[(i, j)];
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Product of the Euclidean column norms, an upper bound on `|det|`.
    pub fn hadamard_bound(&self) -> f64 {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .map(|i| self[(i, j)].powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .product()
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    /// Determinant by LU factorization with partial pivoting.
    pub fn determinant(&self) -> f64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| m[(x, k)].abs().total_cmp(&m[(y, k)].abs()))
                .expect("non-empty range");
            if m[(p, k)] == 0.0 {
                return 0.0;
            }
            if p != k {
                m.swap_rows(p, k);
                det = -det;
            }
            let pivot = m[(k, k)];
            det *= pivot;
            for i in k + 1..n {
                let f = m[(i, k)] / pivot;
                for j in k..n {
                    let v = m[(k, j)];
                    m[(i, j)] -= f * v;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Numeric rank by Gaussian elimination with partial pivoting. A pivot
/// counts when its magnitude exceeds `rel_tol` times the largest entry of
/// the input.
pub fn numeric_rank(m: &Matrix, rel_tol: f64) -> usize {
    assert!(rel_tol > 0.0, "tolerance must be positive");
    let tol = rel_tol * m.max_abs();
    if tol == 0.0 {
        return 0;
    }
    let mut w = m.clone();
    let mut rank = 0;
    for col in 0..w.cols {
        if rank == w.rows {
            break;
        }
        let p = (rank..w.rows)
            .max_by(|&x, &y| w[(x, col)].abs().total_cmp(&w[(y, col)].abs()))
            .expect("non-empty range");
        if w[(p, col)].abs() <= tol {
            continue;
        }
        w.swap_rows(p, rank);
        let pivot = w[(rank, col)];
        for i in rank + 1..w.rows {
            let f = w[(i, col)] / pivot;
            if f != 0.0 {
                for j in col..w.cols {
                    let v = w[(rank, j)];
                    w[(i, j)] -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }
}

/// Fixed decimal format, one row per line.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:>16.9}", self[(i, j)])?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}
