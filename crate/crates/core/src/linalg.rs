//! Gaussian elimination over an exact field.

use crate::matrix::Matrix;
use crate::scalar::Field;

/// Reduced row echelon form and the pivot column of each nonzero row.
pub fn rref<T: Field>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let mut m = m.clone();
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
        m.swap_rows(r, p);
        let inv = T::one() / m[(r, c)].clone();
        for j in c..cols {
            m[(r, j)] = m[(r, j)].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[(i, c)].is_zero() {
                let f = m[(i, c)].clone();
                for j in c..cols {
                    let t = f.clone() * m[(r, j)].clone();
                    m[(i, j)] = m[(i, j)].clone() - t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank<T: Field>(m: &Matrix<T>) -> usize {
    rref(m).1.len()
}

/// A basis of `{ x : m x = 0 }`.
pub fn nullspace<T: Field>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let (r, pivots) = rref(m);
    let cols = m.ncols();
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![T::zero(); cols];
            v[free] = T::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, free)].clone();
            }
            v
        })
        .collect()
}

/// The solution set `particular + span(directions)` of `m x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolution<T> {
    pub particular: Vec<T>,
    pub directions: Vec<Vec<T>>,
}

pub fn solve_affine<T: Field>(m: &Matrix<T>, b: &[T]) -> Option<AffineSolution<T>> {
    assert_eq!(m.nrows(), b.len());
    let cols = m.ncols();
    let aug = Matrix::from_fn(m.nrows(), cols + 1, |r, c| if c < cols { m[(r, c)].clone() } else { b[r].clone() });
    let (red, pivots) = rref(&aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut particular = vec![T::zero(); cols];
    for (i, &p) in pivots.iter().enumerate() {
        particular[p] = red[(i, cols)].clone();
    }
    Some(AffineSolution { particular, directions: nullspace(m) })
}

/// Whether `v` lies in the span of the given vectors (all of length `dim`).
pub fn in_span<T: Field>(dim: usize, spanning: &[Vec<T>], v: &[T]) -> bool {
    if v.iter().all(T::is_zero) {
        return true;
    }
    let m = Matrix::from_columns(dim, spanning);
    solve_affine(&m, v).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Ratio};

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn rank_and_nullspace() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]).unwrap();
        assert_eq!(rank(&m), 1);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(|x| x == &q(0)));
        }
    }

    #[test]
    fn affine_solutions() {
        let m: Matrix<Ratio<i64>> = Matrix::from_rows(vec![vec![Ratio::from(2), Ratio::from(0)], vec![Ratio::from(0), Ratio::from(0)]]).unwrap();
        let s = solve_affine(&m, &[Ratio::from(1), Ratio::from(0)]).unwrap();
        assert_eq!(s.particular[0], Ratio::new(1, 2));
        assert_eq!(s.directions.len(), 1);
        assert!(solve_affine(&m, &[Ratio::from(1), Ratio::from(1)]).is_none());
    }

    #[test]
    fn span_membership() {
        let span = vec![vec![q(1), q(1)]];
        assert!(in_span(2, &span, &[q(3), q(3)]));
        assert!(!in_span(2, &span, &[q(1), q(0)]));
        assert!(in_span(2, &[], &[q(0), q(0)]));
    }
}
