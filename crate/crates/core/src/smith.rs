//! Smith normal form with unimodular accumulators, and the integer lattice
//! queries built on it (kernels, integer solving, homogeneity).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{GkzError, Result};
use crate::matrix::{IntMatrix, Matrix};
use crate::scalar::Integral;

/// `left · input · right = diag(diagonal)` with both transforms unimodular.
/// The inverses are accumulated alongside so that
/// `input = left_inv · diag · right_inv` is available without inversion.
#[derive(Debug, Clone)]
pub struct SmithForm<I> {
    pub left: Matrix<I>,
    pub left_inv: Matrix<I>,
    pub right: Matrix<I>,
    pub right_inv: Matrix<I>,
    /// Nonnegative diagonal, length `min(rows, cols)`; the first `rank`
    /// entries are positive and form a divisibility chain.
    pub diagonal: Vec<I>,
    pub rank: usize,
}

struct Reducer<I> {
    m: Matrix<I>,
    u: Matrix<I>,
    u_inv: Matrix<I>,
    v: Matrix<I>,
    v_inv: Matrix<I>,
}

impl<I: Integral> Reducer<I> {
    /// row[a] += k * row[b]
    fn add_row(&mut self, a: usize, b: usize, k: &I) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.m.ncols() {
            let t = self.m[(b, c)].clone() * k.clone();
            self.m[(a, c)] = self.m[(a, c)].clone() + t;
        }
        for c in 0..self.u.ncols() {
            let t = self.u[(b, c)].clone() * k.clone();
            self.u[(a, c)] = self.u[(a, c)].clone() + t;
        }
        for r in 0..self.u_inv.nrows() {
            let t = self.u_inv[(r, a)].clone() * k.clone();
            self.u_inv[(r, b)] = self.u_inv[(r, b)].clone() - t;
        }
    }

    /// col[a] += k * col[b]
    fn add_col(&mut self, a: usize, b: usize, k: &I) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.m.nrows() {
            let t = self.m[(r, b)].clone() * k.clone();
            self.m[(r, a)] = self.m[(r, a)].clone() + t;
        }
        for r in 0..self.v.nrows() {
            let t = self.v[(r, b)].clone() * k.clone();
            self.v[(r, a)] = self.v[(r, a)].clone() + t;
        }
        for c in 0..self.v_inv.ncols() {
            let t = self.v_inv[(a, c)].clone() * k.clone();
            self.v_inv[(b, c)] = self.v_inv[(b, c)].clone() - t;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn negate_row(&mut self, a: usize) {
        for c in 0..self.m.ncols() {
            self.m[(a, c)] = -self.m[(a, c)].clone();
        }
        for c in 0..self.u.ncols() {
            self.u[(a, c)] = -self.u[(a, c)].clone();
        }
        for r in 0..self.u_inv.nrows() {
            self.u_inv[(r, a)] = -self.u_inv[(r, a)].clone();
        }
    }

    /// Position of the nonzero entry of smallest absolute value in the
    /// trailing block starting at `(t, t)`.
    fn smallest_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.m.nrows() {
            for c in t..self.m.ncols() {
                let x = &self.m[(r, c)];
                if !x.is_zero() && best.is_none_or(|(br, bc)| x.abs() < self.m[(br, bc)].abs()) {
                    best = Some((r, c));
                }
            }
        }
        best
    }
}

/// Computes the Smith normal form of an integer matrix.
pub fn smith_form<I: Integral>(input: &Matrix<I>) -> SmithForm<I> {
    let (rows, cols) = (input.nrows(), input.ncols());
    let mut red = Reducer {
        m: input.clone(),
        u: Matrix::identity(rows),
        u_inv: Matrix::identity(rows),
        v: Matrix::identity(cols),
        v_inv: Matrix::identity(cols),
    };
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = red.smallest_pivot(t) else { break };
        red.swap_rows(t, pr);
        red.swap_cols(t, pc);
        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if !red.m[(r, t)].is_zero() {
                    let q = red.m[(r, t)].div_floor(&red.m[(t, t)]);
                    red.add_row(r, t, &-q);
                    if !red.m[(r, t)].is_zero() {
                        dirty = true;
                    }
                }
            }
            for c in t + 1..cols {
                if !red.m[(t, c)].is_zero() {
                    let q = red.m[(t, c)].div_floor(&red.m[(t, t)]);
                    red.add_col(c, t, &-q);
                    if !red.m[(t, c)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // a remainder is now smaller than the pivot; promote it
                let col_best = (t + 1..rows).filter(|&r| !red.m[(r, t)].is_zero()).min_by_key(|&r| red.m[(r, t)].abs());
                let row_best = (t + 1..cols).filter(|&c| !red.m[(t, c)].is_zero()).min_by_key(|&c| red.m[(t, c)].abs());
                match (col_best, row_best) {
                    (Some(r), Some(c)) if red.m[(t, c)].abs() < red.m[(r, t)].abs() => red.swap_cols(t, c),
                    (Some(r), _) => red.swap_rows(t, r),
                    (None, Some(c)) => red.swap_cols(t, c),
                    (None, None) => unreachable!(),
                }
                continue;
            }
            let offender = (t + 1..rows)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !red.m[(r, c)].is_multiple_of(&red.m[(t, t)]));
            match offender {
                Some((r, _)) => red.add_row(t, r, &I::one()),
                None => break,
            }
        }
        if red.m[(t, t)].is_negative() {
            red.negate_row(t);
        }
        rank += 1;
    }
    let diagonal = (0..rows.min(cols)).map(|i| red.m[(i, i)].clone()).collect();
    SmithForm { left: red.u, left_inv: red.u_inv, right: red.v, right_inv: red.v_inv, diagonal, rank }
}

/// The factorization `B = C · D1 · D2 · M` of a full-rank `d × n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SmithDecomposition {
    pub c: IntMatrix,
    pub d1: IntMatrix,
    pub d2: IntMatrix,
    pub m: IntMatrix,
    /// Elementary divisors `e_1 | e_2 | ... | e_d`, all positive.
    pub divisors: Vec<BigInt>,
}

impl SmithDecomposition {
    /// `D2 · M`, a matrix whose columns generate the full lattice.
    pub fn lattice_matrix(&self) -> IntMatrix {
        self.d2.mul(&self.m)
    }

    pub fn product(&self) -> IntMatrix {
        self.c.mul(&self.d1).mul(&self.d2).mul(&self.m)
    }
}

pub fn smith_decompose(b: &IntMatrix) -> Result<SmithDecomposition> {
    let (d, n) = (b.nrows(), b.ncols());
    let form = smith_form(b);
    if form.rank < d {
        return Err(GkzError::RankDeficient);
    }
    let divisors = form.diagonal[..d].to_vec();
    let d1 = Matrix::from_fn(d, d, |r, c| if r == c { divisors[r].clone() } else { BigInt::zero() });
    let d2 = Matrix::from_fn(d, n, |r, c| if r == c { BigInt::one() } else { BigInt::zero() });
    Ok(SmithDecomposition { c: form.left_inv, d1, d2, m: form.right_inv, divisors })
}

/// A `Z`-basis of the integer kernel `{ l : A l = 0 }`, in a canonical
/// echelon form: scanning coordinates from the last one, each basis vector
/// has a positive pivot and the pivots are strictly staggered.
pub fn lattice_kernel<I: Integral>(a: &Matrix<I>) -> Vec<Vec<I>> {
    let form = smith_form(a);
    let n = a.ncols();
    let basis: Vec<Vec<I>> = (form.rank..n).map(|k| form.right.column(k)).collect();
    echelon_from_right(basis, n)
}

/// Hermite-style reduction of a set of row vectors with pivots taken from
/// the last coordinate backwards.
fn echelon_from_right<I: Integral>(mut rows: Vec<Vec<I>>, n: usize) -> Vec<Vec<I>> {
    let mut done = 0;
    for col in (0..n).rev() {
        if done == rows.len() {
            break;
        }
        // Euclid on column `col` across rows[done..]
        loop {
            let nz: Vec<usize> = (done..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    rows.swap(done, i);
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = rows[i][col].div_floor(&rows[p][col]);
                    let pr = rows[p].clone();
                    for (x, y) in rows[i].iter_mut().zip(&pr) {
                        *x = x.clone() - q.clone() * y.clone();
                    }
                }
            }
        }
        if done < rows.len() && !rows[done][col].is_zero() {
            if rows[done][col].is_negative() {
                for x in rows[done].iter_mut() {
                    *x = -x.clone();
                }
            }
            // reduce earlier rows modulo the pivot
            let pr = rows[done].clone();
            for i in 0..done {
                let q = rows[i][col].div_floor(&pr[col]);
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x = x.clone() - q.clone() * y.clone();
                }
            }
            done += 1;
        }
    }
    rows
}

/// An integer solution of `M x = b`, if one exists.
pub fn solve_integer<I: Integral>(m: &Matrix<I>, b: &[I]) -> Option<Vec<I>> {
    assert_eq!(m.nrows(), b.len());
    let form = smith_form(m);
    let ub = form.left.mul_vec(b);
    let mut y = vec![I::zero(); m.ncols()];
    for (i, rhs) in ub.iter().enumerate() {
        if i < form.rank {
            let (q, r) = rhs.div_rem(&form.diagonal[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !rhs.is_zero() {
            return None;
        }
    }
    Some(form.right.mul_vec(&y))
}

/// An integral functional `h` with `h · a_i = 1` for every column.
pub fn homogeneity_vector<I: Integral>(a: &Matrix<I>) -> Option<Vec<I>> {
    let ones = vec![I::one(); a.ncols()];
    let h = solve_integer(&a.transpose(), &ones)?;
    // prefer the canonical (1, 0, ..., 0) on homogenized matrices
    let first_row_ones = (0..a.ncols()).all(|c| a[(0, c)].is_one());
    if first_row_ones {
        let mut e = vec![I::zero(); a.nrows()];
        e[0] = I::one();
        return Some(e);
    }
    Some(h)
}
