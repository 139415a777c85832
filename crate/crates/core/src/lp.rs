//! Exact linear feasibility by a phase-one simplex with Bland's rule.

use crate::matrix::Matrix;
use crate::scalar::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    NonNegative,
    Free,
}

/// A system of linear constraints over variables that are either free or
/// nonnegative. Solved exactly; returns a witness when feasible.
#[derive(Debug, Clone)]
pub struct LinearSystem<T> {
    kinds: Vec<VarKind>,
    rows: Vec<(Vec<T>, Relation, T)>,
}

impl<T: Field> LinearSystem<T> {
    pub fn new(kinds: Vec<VarKind>) -> Self {
        LinearSystem { kinds, rows: Vec::new() }
    }

    pub fn nonnegative(n: usize) -> Self {
        Self::new(vec![VarKind::NonNegative; n])
    }

    pub fn num_vars(&self) -> usize {
        self.kinds.len()
    }

    pub fn constrain(&mut self, coeffs: Vec<T>, rel: Relation, rhs: T) -> &mut Self {
        assert_eq!(coeffs.len(), self.kinds.len(), "constraint width mismatch");
        self.rows.push((coeffs, rel, rhs));
        self
    }

    /// A feasible point, or `None` if the system is infeasible.
    pub fn solve(&self) -> Option<Vec<T>> {
        // standard form columns: x+ for every var, x- for free vars, slacks
        let n = self.kinds.len();
        let mut col_of_neg = vec![None; n];
        let mut ncols = n;
        for (i, k) in self.kinds.iter().enumerate() {
            if *k == VarKind::Free {
                col_of_neg[i] = Some(ncols);
                ncols += 1;
            }
        }
        let slack_start = ncols;
        ncols += self.rows.iter().filter(|r| r.1 != Relation::Eq).count();

        let m = self.rows.len();
        let mut a = Matrix::<T>::zeros(m, ncols);
        let mut b = vec![T::zero(); m];
        let mut slack = slack_start;
        for (r, (coeffs, rel, rhs)) in self.rows.iter().enumerate() {
            for (i, c) in coeffs.iter().enumerate() {
                a[(r, i)] = c.clone();
                if let Some(neg) = col_of_neg[i] {
                    a[(r, neg)] = -c.clone();
                }
            }
            match rel {
                Relation::Eq => {}
                Relation::Ge => {
                    a[(r, slack)] = -T::one();
                    slack += 1;
                }
                Relation::Le => {
                    a[(r, slack)] = T::one();
                    slack += 1;
                }
            }
            b[r] = rhs.clone();
        }
        let y = phase_one(a, b)?;
        Some(
            (0..n)
                .map(|i| match col_of_neg[i] {
                    Some(neg) => y[i].clone() - y[neg].clone(),
                    None => y[i].clone(),
                })
                .collect(),
        )
    }

    pub fn is_feasible(&self) -> bool {
        self.solve().is_some()
    }
}

/// Finds `y >= 0` with `a y = b`.
fn phase_one<T: Field>(mut a: Matrix<T>, mut b: Vec<T>) -> Option<Vec<T>> {
    let (m, n) = (a.nrows(), a.ncols());
    for r in 0..m {
        if b[r].is_negative() {
            b[r] = -b[r].clone();
            for c in 0..n {
                a[(r, c)] = -a[(r, c)].clone();
            }
        }
    }
    // tableau: [a | I | b], artificial columns n..n+m
    let width = n + m + 1;
    let mut t = Matrix::<T>::zeros(m + 1, width);
    for r in 0..m {
        for c in 0..n {
            t[(r, c)] = a[(r, c)].clone();
        }
        t[(r, n + r)] = T::one();
        t[(r, width - 1)] = b[r].clone();
    }
    // objective row: minimize the sum of artificials, in reduced form
    for c in 0..width {
        if (n..n + m).contains(&c) {
            continue;
        }
        let s = (0..m).fold(T::zero(), |acc, r| acc + t[(r, c)].clone());
        t[(m, c)] = -s;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        let Some(enter) = (0..n + m).find(|&c| t[(m, c)].is_negative()) else { break };
        let mut leave: Option<(usize, T)> = None;
        for r in 0..m {
            if t[(r, enter)].is_positive() {
                let ratio = t[(r, width - 1)].clone() / t[(r, enter)].clone();
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // the phase-one objective is bounded below by zero
        let (pr, _) = leave.expect("phase one is bounded");
        let inv = T::one() / t[(pr, enter)].clone();
        for c in 0..width {
            t[(pr, c)] = t[(pr, c)].clone() * inv.clone();
        }
        for r in 0..=m {
            if r != pr && !t[(r, enter)].is_zero() {
                let f = t[(r, enter)].clone();
                for c in 0..width {
                    let v = f.clone() * t[(pr, c)].clone();
                    t[(r, c)] = t[(r, c)].clone() - v;
                }
            }
        }
        basis[pr] = enter;
    }
    if !t[(m, width - 1)].is_zero() {
        return None;
    }
    let mut y = vec![T::zero(); n];
    for (r, &bv) in basis.iter().enumerate() {
        if bv < n {
            y[bv] = t[(r, width - 1)].clone();
        }
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Signed;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn cone_membership_witness() {
        // (1,1) = x1 (3,1) + x2 (2,1) + x3 (0,1), x >= 0
        let mut sys = LinearSystem::nonnegative(3);
        sys.constrain(vec![q(3), q(2), q(0)], Relation::Eq, q(1));
        sys.constrain(vec![q(1), q(1), q(1)], Relation::Eq, q(1));
        let x = sys.solve().unwrap();
        assert!(x.iter().all(|v| !v.is_negative()));
        assert_eq!(q(3) * x[0].clone() + q(2) * x[1].clone(), q(1));
    }

    #[test]
    fn infeasible_outside_cone() {
        let mut sys = LinearSystem::nonnegative(3);
        sys.constrain(vec![q(3), q(2), q(0)], Relation::Eq, q(-1));
        sys.constrain(vec![q(1), q(1), q(1)], Relation::Eq, q(0));
        assert!(!sys.is_feasible());
    }

    #[test]
    fn free_variables_and_inequalities() {
        // phi free with phi*(1) = 0 and phi*(2) >= 1 is infeasible for collinear columns
        let mut sys = LinearSystem::new(vec![VarKind::Free]);
        sys.constrain(vec![q(1)], Relation::Eq, q(0));
        sys.constrain(vec![q(2)], Relation::Ge, q(1));
        assert!(!sys.is_feasible());
        let mut sys = LinearSystem::new(vec![VarKind::Free, VarKind::Free]);
        sys.constrain(vec![q(1), q(-1)], Relation::Le, q(-3));
        let x = sys.solve().unwrap();
        assert!(x[0].clone() - x[1].clone() <= q(-3));
    }
}
