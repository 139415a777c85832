//! The cone `R+ A` and the semigroup `N A`: faces, support functions,
//! membership and saturation.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{GkzError, Result};
use crate::linalg;
use crate::lp::{LinearSystem, Relation, VarKind};
use crate::matrix::{dot, IntMatrix, Matrix};
use crate::{Int, Rational};

/// Face enumeration solves one feasibility problem per column subset.
pub const MAX_FACE_COLUMNS: usize = 12;

/// Largest lattice box scanned when collecting Hilbert basis candidates.
pub const MAX_PARALLELEPIPED_POINTS: usize = 2_000_000;

/// A face of the cone, i.e. the set of columns on which a linear functional
/// that is nonnegative on all columns vanishes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Face {
    /// 0-based column indices, increasing.
    pub columns: Vec<usize>,
    /// Integral primitive functional: zero on the face, positive off it.
    #[serde(serialize_with = "crate::serde_ints")]
    pub certificate: Vec<Int>,
    /// Dimension of the rational span of the face.
    pub dim: usize,
}

impl Face {
    pub fn contains(&self, column: usize) -> bool {
        self.columns.binary_search(&column).is_ok()
    }

    /// Checks the certificate against the matrix exactly.
    pub fn validates(&self, a: &IntMatrix) -> bool {
        (0..a.ncols()).all(|i| {
            let v = dot(&self.certificate, &a.column(i));
            if self.contains(i) {
                v.is_zero()
            } else {
                v.is_positive()
            }
        })
    }

    /// The columns of the face as vectors.
    pub fn vectors(&self, a: &IntMatrix) -> Vec<Vec<Int>> {
        self.columns.iter().map(|&i| a.column(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceLattice {
    /// All faces ordered by dimension then column set; the first one is the
    /// minimal face and the last one the improper face.
    pub faces: Vec<Face>,
    pub pointed: bool,
    pub full_dimensional: bool,
}

impl FaceLattice {
    pub fn minimal(&self) -> &Face {
        &self.faces[0]
    }

    pub fn improper(&self) -> &Face {
        self.faces.last().expect("the improper face always exists")
    }

    pub fn proper_faces(&self) -> &[Face] {
        &self.faces[..self.faces.len() - 1]
    }

    pub fn facets(&self, d: usize) -> impl Iterator<Item = &Face> {
        self.proper_faces().iter().filter(move |f| f.dim + 1 == d)
    }
}

pub(crate) fn to_rational(v: &[Int]) -> Vec<Rational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Scales a rational vector to the primitive integral vector on the same ray.
pub(crate) fn primitive(v: &[Rational]) -> Vec<Int> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Int> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

fn column_rank(a: &IntMatrix, cols: &[usize]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    linalg::rank(&a.select_columns(cols).map(|x| BigRational::from_integer(x.clone())))
}

/// Solves for a functional zero on `face` and at least one on the other
/// columns.
fn face_certificate(a: &IntMatrix, face: &BTreeSet<usize>) -> Option<Vec<Int>> {
    let d = a.nrows();
    let mut sys = LinearSystem::new(vec![VarKind::Free; d]);
    for i in 0..a.ncols() {
        let col = to_rational(&a.column(i));
        if face.contains(&i) {
            sys.constrain(col, Relation::Eq, Rational::zero());
        } else {
            sys.constrain(col, Relation::Ge, Rational::one());
        }
    }
    sys.solve().map(|phi| primitive(&phi))
}

/// Enumerates all faces of the cone spanned by the columns.
pub fn face_lattice(a: &IntMatrix) -> Result<FaceLattice> {
    let n = a.ncols();
    if n > MAX_FACE_COLUMNS {
        return Err(GkzError::TooManyColumns { max: MAX_FACE_COLUMNS, got: n });
    }
    let d = a.nrows();
    let zero_cols: Vec<usize> = (0..n).filter(|&i| a.column(i).iter().all(Zero::is_zero)).collect();
    let nonzero: Vec<usize> = (0..n).filter(|i| !zero_cols.contains(i)).collect();
    let rat_cols: Vec<Vec<Rational>> = (0..n).map(|i| to_rational(&a.column(i))).collect();

    let mut faces = Vec::new();
    for mask in 0u32..(1u32 << nonzero.len()) {
        let mut set: BTreeSet<usize> = zero_cols.iter().copied().collect();
        for (bit, &i) in nonzero.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                set.insert(i);
            }
        }
        // faces are closed under taking columns in their span
        let span: Vec<Vec<Rational>> = set.iter().map(|&i| rat_cols[i].clone()).collect();
        if nonzero.iter().any(|i| !set.contains(i) && linalg::in_span(d, &span, &rat_cols[*i])) {
            continue;
        }
        if let Some(certificate) = face_certificate(a, &set) {
            let columns: Vec<usize> = set.into_iter().collect();
            let dim = column_rank(a, &columns);
            faces.push(Face { columns, certificate, dim });
        }
    }
    faces.sort_by(|x, y| (x.dim, x.columns.len(), &x.columns).cmp(&(y.dim, y.columns.len(), &y.columns)));
    let pointed = faces[0].dim == 0;
    let full_dimensional = column_rank(a, &(0..n).collect::<Vec<_>>()) == d;
    Ok(FaceLattice { faces, pointed, full_dimensional })
}

/// The primitive integral support function of a facet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportFunction {
    pub facet: Face,
    #[serde(serialize_with = "crate::serde_ints")]
    pub functional: Vec<Int>,
}

impl SupportFunction {
    pub fn eval(&self, v: &[Int]) -> Int {
        dot(&self.functional, v)
    }

    pub fn eval_rational(&self, v: &[Rational]) -> Rational {
        to_rational(&self.functional).iter().zip(v).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
    }
}

/// Inward facet normals (primitive, integral) of a full-dimensional cone.
pub(crate) fn facet_normals(a: &IntMatrix, lattice: &FaceLattice) -> Vec<(Face, Vec<Int>)> {
    let d = a.nrows();
    lattice
        .facets(d)
        .map(|f| {
            let mut rows: Vec<Vec<Rational>> = f.vectors(a).iter().map(|c| to_rational(c)).collect();
            if rows.is_empty() {
                rows.push(vec![Rational::zero(); d]);
            }
            let ns = linalg::nullspace(&Matrix::from_rows(rows).expect("columns share a length"));
            let mut normal = primitive(&ns[0]);
            let off = (0..a.ncols()).find(|&i| !f.contains(i)).expect("a facet misses some column");
            if dot(&normal, &a.column(off)).is_negative() {
                normal = normal.into_iter().map(|x| -x).collect();
            }
            (f.clone(), normal)
        })
        .collect()
}

/// One support function per facet, normalized so that its values on the
/// columns generate `Z`.
pub fn support_functions(a: &IntMatrix) -> Result<Vec<SupportFunction>> {
    let lattice = face_lattice(a)?;
    if !lattice.full_dimensional {
        return Err(GkzError::NotFullDimensional);
    }
    if !a.spans_lattice() {
        return Err(GkzError::LatticeNotSpanned);
    }
    Ok(facet_normals(a, &lattice)
        .into_iter()
        .map(|(facet, normal)| {
            let g = (0..a.ncols()).fold(BigInt::zero(), |acc, i| acc.gcd(&dot(&normal, &a.column(i))));
            let functional = normal.into_iter().map(|x| x / &g).collect();
            SupportFunction { facet, functional }
        })
        .collect())
}

/// Rational cone membership with a nonnegative witness `x`, `A x = b`.
pub fn cone_witness(a: &IntMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let mut sys = LinearSystem::nonnegative(a.ncols());
    for r in 0..a.nrows() {
        sys.constrain(to_rational(&a.row(r)), Relation::Eq, b[r].clone());
    }
    sys.solve()
}

pub fn in_cone(a: &IntMatrix, b: &[Rational]) -> bool {
    cone_witness(a, b).is_some()
}

/// Membership of an integral point in `Q+ A`.
pub fn saturation_contains(a: &IntMatrix, b: &[Int]) -> bool {
    in_cone(a, &to_rational(b))
}

/// Membership in the interior of the cone (empty unless full-dimensional).
pub fn in_cone_interior(a: &IntMatrix, b: &[Rational]) -> Result<bool> {
    let lattice = face_lattice(a)?;
    if !lattice.full_dimensional {
        return Ok(false);
    }
    if !lattice.pointed && lattice.facets(a.nrows()).next().is_none() {
        // the cone is the whole space
        return Ok(true);
    }
    Ok(facet_normals(a, &lattice).iter().all(|(_, n)| {
        to_rational(n).iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y).is_positive()
    }))
}

/// Semigroup membership oracle for a fixed pointed matrix, memoizing every
/// visited lattice point.
#[derive(Debug)]
pub struct Semigroup {
    a: IntMatrix,
    columns: Vec<Vec<Int>>,
    nonzero: Vec<usize>,
    grading: Vec<Int>,
    memo: HashMap<Vec<Int>, Option<usize>>,
}

impl Semigroup {
    pub fn new(a: &IntMatrix) -> Result<Self> {
        let lattice = face_lattice(a)?;
        Self::with_lattice(a, &lattice)
    }

    pub fn with_lattice(a: &IntMatrix, lattice: &FaceLattice) -> Result<Self> {
        if !lattice.pointed {
            return Err(GkzError::NotPointed);
        }
        let columns = a.columns();
        let nonzero = (0..a.ncols()).filter(|&i| columns[i].iter().any(|x| !x.is_zero())).collect();
        Ok(Semigroup { a: a.clone(), columns, nonzero, grading: lattice.minimal().certificate.clone(), memo: HashMap::new() })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    /// A strictly positive integral grading on the nonzero columns.
    pub fn grading(&self) -> &[Int] {
        &self.grading
    }

    pub fn contains(&mut self, b: &[Int]) -> bool {
        self.witness(b).is_some()
    }

    /// Some `x` in `N^n` with `A x = b`.
    pub fn witness(&mut self, b: &[Int]) -> Option<Vec<Int>> {
        if !self.solve(b.to_vec()) {
            return None;
        }
        let mut x = vec![BigInt::zero(); self.a.ncols()];
        let mut cur = b.to_vec();
        while let Some(Some(i)) = self.memo.get(&cur).cloned() {
            if i == usize::MAX {
                break;
            }
            x[i] += 1;
            cur = sub(&cur, &self.columns[i]);
        }
        Some(x)
    }

    /// Iterative depth-first search. Memo entries: `Some(i)` reachable by
    /// first subtracting column `i` (`usize::MAX` marks the origin), `None`
    /// unreachable.
    fn solve(&mut self, b: Vec<Int>) -> bool {
        if let Some(r) = self.memo.get(&b) {
            return r.is_some();
        }
        let mut stack: Vec<(Vec<Int>, usize)> = vec![(b.clone(), 0)];
        while let Some((point, next)) = stack.pop() {
            if next == 0 {
                if let Some(r) = self.trivial(&point) {
                    self.memo.insert(point, r);
                    continue;
                }
            }
            let mut pushed = false;
            let mut found = None;
            for k in next..self.nonzero.len() {
                let i = self.nonzero[k];
                let child = sub(&point, &self.columns[i]);
                match self.memo.get(&child) {
                    Some(Some(_)) => {
                        found = Some(i);
                        break;
                    }
                    Some(None) => continue,
                    None => {
                        stack.push((point.clone(), k));
                        stack.push((child, 0));
                        pushed = true;
                        break;
                    }
                }
            }
            if pushed {
                continue;
            }
            self.memo.insert(point, found);
        }
        self.memo.get(&b).is_some_and(Option::is_some)
    }

    fn trivial(&self, point: &[Int]) -> Option<Option<usize>> {
        if point.iter().all(Zero::is_zero) {
            return Some(Some(usize::MAX));
        }
        if !dot(&self.grading, point).is_positive() {
            return Some(None);
        }
        None
    }
}

fn sub(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn semigroup_contains(a: &IntMatrix, b: &[Int]) -> Result<bool> {
    Ok(Semigroup::new(a)?.contains(b))
}

pub fn semigroup_witness(a: &IntMatrix, b: &[Int]) -> Result<Option<Vec<Int>>> {
    Ok(Semigroup::new(a)?.witness(b))
}

/// Lattice points of the half-open parallelepiped spanned by `basis`.
fn parallelepiped_points(d: usize, basis: &[Vec<Int>]) -> Result<Vec<Vec<Int>>> {
    let mut lo = vec![BigInt::zero(); d];
    let mut hi = vec![BigInt::zero(); d];
    for v in basis {
        for k in 0..d {
            if v[k].is_negative() {
                lo[k] += &v[k];
            } else {
                hi[k] += &v[k];
            }
        }
    }
    let mut count: usize = 1;
    for k in 0..d {
        let w: usize = (&hi[k] - &lo[k] + 1u32).try_into().unwrap_or(usize::MAX);
        count = count.saturating_mul(w);
    }
    if count > MAX_PARALLELEPIPED_POINTS {
        return Err(GkzError::SearchBoundExceeded(format!("parallelepiped box has {count} points")));
    }
    let m = Matrix::from_columns(d, &basis.iter().map(|v| to_rational(v)).collect::<Vec<_>>());
    let mut out = Vec::new();
    let mut p = lo.clone();
    'scan: loop {
        if let Some(sol) = linalg::solve_affine(&m, &to_rational(&p)) {
            let t = sol.particular;
            if t.iter().all(|x| !x.is_negative() && x < &Rational::one()) {
                out.push(p.clone());
            }
        }
        for k in 0..d {
            if p[k] < hi[k] {
                p[k] += 1;
                continue 'scan;
            }
            p[k] = lo[k].clone();
        }
        break;
    }
    Ok(out)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The Hilbert basis of `Q+ A ∩ Z^d` for a pointed cone.
///
/// Every element of the saturation is a nonnegative integer combination of
/// linearly independent columns plus a lattice point of the corresponding
/// half-open parallelepiped, so the Hilbert basis is found among the columns
/// and those points; the irreducible ones are kept.
pub fn hilbert_basis(a: &IntMatrix) -> Result<Vec<Vec<Int>>> {
    let lattice = face_lattice(a)?;
    if !lattice.pointed {
        return Err(GkzError::NotPointed);
    }
    let d = a.nrows();
    let cols: Vec<Vec<Int>> = a.columns().into_iter().filter(|c| c.iter().any(|x| !x.is_zero())).collect();
    let r = column_rank(a, &(0..a.ncols()).collect::<Vec<_>>());
    let mut candidates: BTreeSet<Vec<Int>> = cols.iter().cloned().collect();
    for sub in subsets(cols.len(), r) {
        let basis: Vec<Vec<Int>> = sub.iter().map(|&i| cols[i].clone()).collect();
        let idx: Vec<usize> = (0..basis.len()).collect();
        let m = Matrix::from_columns(d, &basis);
        if column_rank(&m, &idx) < r {
            continue;
        }
        for p in parallelepiped_points(d, &basis)? {
            if p.iter().any(|x| !x.is_zero()) {
                candidates.insert(p);
            }
        }
    }
    let cands: Vec<Vec<Int>> = candidates.into_iter().collect();
    Ok(cands
        .iter()
        .filter(|x| !cands.iter().any(|y| y != *x && saturation_contains(a, &sub(x, y))))
        .cloned()
        .collect())
}

pub fn is_saturated(a: &IntMatrix) -> Result<bool> {
    let hb = hilbert_basis(a)?;
    let mut sg = Semigroup::new(a)?;
    Ok(hb.iter().all(|h| sg.contains(h)))
}
