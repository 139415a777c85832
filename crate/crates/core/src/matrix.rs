//! Dense matrices over a generic scalar, with the integer-matrix text format.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{GkzError, Result};
use crate::scalar::Integral;

/// Row-major dense matrix.
///
/// The lattice flag is a lazily filled cache for [`Matrix::spans_lattice`];
/// it never participates in equality.
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    lattice: OnceLock<bool>,
}

impl<T: Clone> Clone for Matrix<T> {
    fn clone(&self) -> Self {
        let lattice = OnceLock::new();
        if let Some(v) = self.lattice.get() {
            let _ = lattice.set(*v);
        }
        Matrix { rows: self.rows, cols: self.cols, data: self.data.clone(), lattice }
    }
}

impl<T: PartialEq> PartialEq for Matrix<T> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<T: Eq> Eq for Matrix<T> {}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matrix").field("rows", &self.rows).field("cols", &self.cols).field("data", &self.data).finish()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        self.lattice = OnceLock::new();
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data, lattice: OnceLock::new() }
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(GkzError::Parse("rows have different lengths".into()));
        }
        Ok(Matrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect(), lattice: OnceLock::new() })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<T>]) -> Self {
        Matrix::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    /// The submatrix keeping the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Matrix::from_fn(self.rows, cols.len(), |r, c| self[(r, cols[c])].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect(), lattice: OnceLock::new() }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
            self.lattice = OnceLock::new();
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
            self.lattice = OnceLock::new();
        }
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + std::ops::Mul<Output = T> + std::ops::Add<Output = T>,
{
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        Matrix::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self[(r, k)].clone() * other[(k, c)].clone())
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| (0..self.cols).fold(T::zero(), |acc, k| acc + self[(r, k)].clone() * v[k].clone()))
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "vector-matrix shape mismatch");
        (0..self.cols)
            .map(|c| (0..self.rows).fold(T::zero(), |acc, k| acc + v[k].clone() * self[(k, c)].clone()))
            .collect()
    }
}

impl<I: Integral> Matrix<I> {
    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> I {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return I::one();
        }
        let mut m = self.clone();
        let mut sign = I::one();
        let mut prev = I::one();
        for k in 0..n {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !m[(r, k)].is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return I::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m[(i, j)].clone() * m[(k, k)].clone() - m[(i, k)].clone() * m[(k, j)].clone()) / prev.clone();
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }

    /// Whether the columns generate the full integer lattice.
    pub fn spans_lattice(&self) -> bool {
        *self.lattice.get_or_init(|| {
            let smith = crate::smith::smith_form(self);
            smith.rank == self.rows && smith.diagonal.iter().all(|e| e.is_one())
        })
    }

    pub fn to_big(&self) -> Matrix<BigInt> {
        self.map(Integral::to_bigint)
    }
}

/// The defining integer matrix.
pub type IntMatrix = Matrix<BigInt>;

impl IntMatrix {
    /// Parses the text format: one row per line (or `;`-separated), entries
    /// separated by whitespace or commas. Blank lines and `#` comments are
    /// skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.split(['\n', ';']) {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<BigInt>().map_err(|_| GkzError::Parse(format!("bad matrix entry `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.is_empty() || rows[0].is_empty() {
            return Err(GkzError::Parse("empty matrix".into()));
        }
        Matrix::from_rows(rows)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
            .expect("rows of equal length")
    }

    /// The homogenization: a new first row of ones and a new first column
    /// `(1, 0, ..., 0)` bordering the original matrix.
    pub fn homogenize(&self) -> IntMatrix {
        Matrix::from_fn(self.rows + 1, self.cols + 1, |r, c| match (r, c) {
            (0, _) => BigInt::one(),
            (_, 0) => BigInt::zero(),
            _ => self[(r - 1, c - 1)].clone(),
        })
    }

    /// Undoes [`IntMatrix::homogenize`], if this matrix has that shape.
    pub fn dehomogenize(&self) -> Option<IntMatrix> {
        if self.rows < 2 || self.cols < 2 {
            return None;
        }
        let bordered = (0..self.cols).all(|c| self[(0, c)].is_one()) && (1..self.rows).all(|r| self[(r, 0)].is_zero());
        bordered.then(|| Matrix::from_fn(self.rows - 1, self.cols - 1, |r, c| self[(r + 1, c + 1)].clone()))
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    /// Writes the inline format `3 2 0; 1 1 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
        }
        Ok(())
    }
}

pub(crate) fn dot<I: Integral>(a: &[I], b: &[I]) -> I {
    a.iter().zip(b).fold(I::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}
