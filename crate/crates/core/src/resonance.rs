//! Strongly resonant parameters, their dual counterpart, and the integer
//! bounds built from them.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{GkzError, Result};
use crate::linalg::solve_affine;
use crate::lp::{LinearSystem, Relation, VarKind};
use crate::matrix::{IntMatrix, Matrix};
use crate::poly::TermOrder;
use crate::polyhedral::{face_lattice, in_cone_interior, to_rational, Face, FaceLattice, Semigroup};
use crate::smith::{homogeneity_vector, lattice_kernel};
use crate::toric::{quasi_degrees_with, toric_ideal, DEFAULT_FILTRATION_BOUND};
use crate::{Int, Rational};

/// Largest `l∞` radius scanned by the dual parameter search.
pub const DUAL_SEARCH_RADIUS: i64 = 6;
/// Largest number of column additions tried when growing `δ_A`.
pub const DELTA_GROWTH_STEPS: usize = 64;

/// The set `∪_{m ≥ 1} (α - m a_j + Q F)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResonanceComponent {
    pub column: usize,
    #[serde(serialize_with = "crate::serde_ints")]
    pub offset: Vec<Int>,
    pub face: Face,
    #[serde(serialize_with = "crate::serde_ints")]
    pub shift: Vec<Int>,
}

/// A certificate for `β ∈ sRes(A)`: `β + m a_j ∈ α + Q F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResonanceWitness {
    pub component: ResonanceComponent,
    #[serde(serialize_with = "crate::serde_int")]
    pub multiplier: Int,
}

#[derive(Debug, Clone)]
pub struct ResonanceSet {
    pub matrix: IntMatrix,
    pub lattice: FaceLattice,
    pub components: Vec<ResonanceComponent>,
}

fn q(x: &Int) -> Rational {
    Rational::from_integer(x.clone())
}

impl ResonanceSet {
    pub fn new(a: &IntMatrix) -> Result<Self> {
        Self::with_order(a, TermOrder::default(), DEFAULT_FILTRATION_BOUND)
    }

    pub fn with_order(a: &IntMatrix, order: TermOrder, bound: usize) -> Result<Self> {
        let lattice = face_lattice(a)?;
        if !lattice.pointed {
            return Err(GkzError::NotPointed);
        }
        let ideal = toric_ideal(a, order);
        let mut components = Vec::new();
        for j in 0..a.ncols() {
            let shift = a.column(j);
            if shift.iter().all(Zero::is_zero) {
                // ∂_j - 1 lies in I_A, so S_A / <∂_j> vanishes
                continue;
            }
            for pair in quasi_degrees_with(a, j, &lattice, &ideal, bound)?.components {
                components.push(ResonanceComponent { column: j, offset: pair.offset, face: pair.face, shift: shift.clone() });
            }
        }
        Ok(ResonanceSet { matrix: a.clone(), lattice, components })
    }

    pub fn contains(&self, beta: &[Rational]) -> bool {
        self.witness(beta).is_some()
    }

    pub fn witness(&self, beta: &[Rational]) -> Option<ResonanceWitness> {
        self.components.iter().find_map(|c| {
            component_multiplier(&self.matrix, c, beta)
                .map(|m| ResonanceWitness { component: c.clone(), multiplier: m })
        })
    }
}

/// Solves `m a_j - F g = α - β` and returns an admissible integer `m ≥ 1`.
fn component_multiplier(a: &IntMatrix, c: &ResonanceComponent, beta: &[Rational]) -> Option<Int> {
    let d = a.nrows();
    let mut cols = vec![to_rational(&c.shift)];
    cols.extend(c.face.vectors(a).iter().map(|f| to_rational(f)));
    let m = Matrix::from_columns(d, &cols);
    let rhs: Vec<Rational> = c.offset.iter().zip(beta).map(|(x, b)| q(x) - b).collect();
    let sol = solve_affine(&m, &rhs)?;
    if sol.directions.iter().any(|v| !v[0].is_zero()) {
        // a_j ∈ Q F: the multiplier is free
        return Some(Int::one());
    }
    let mult = &sol.particular[0];
    (mult.is_integer() && *mult >= Rational::one()).then(|| mult.to_integer())
}

/// `β ∈ sRes(A)`.
pub fn sres_contains(a: &IntMatrix, beta: &[Rational]) -> Result<bool> {
    check_len(a, beta)?;
    Ok(ResonanceSet::new(a)?.contains(beta))
}

pub fn sres_witness(a: &IntMatrix, beta: &[Rational]) -> Result<Option<ResonanceWitness>> {
    check_len(a, beta)?;
    Ok(ResonanceSet::new(a)?.witness(beta))
}

fn check_len(a: &IntMatrix, beta: &[Rational]) -> Result<()> {
    if beta.len() != a.nrows() {
        return Err(GkzError::DimensionMismatch(format!("parameter has {} entries, matrix has {} rows", beta.len(), a.nrows())));
    }
    Ok(())
}

/// Integral functionals cutting out the image of `Z^d` in `Q^d / Q F`.
fn quotient_lattice_duals(a: &IntMatrix, face: &Face) -> Vec<Vec<Int>> {
    let d = a.nrows();
    if face.columns.is_empty() {
        return (0..d).map(|i| (0..d).map(|k| if k == i { Int::one() } else { Int::zero() }).collect()).collect();
    }
    let rows = face.vectors(a);
    lattice_kernel(&Matrix::from_rows(rows).expect("face vectors share a length"))
}

/// `β ∈ (Q+ A) + Q F`, decided by an exact feasibility problem.
fn cone_plus_span(a: &IntMatrix, face: &Face, beta: &[Rational]) -> bool {
    let n = a.ncols();
    let k = face.columns.len();
    let mut kinds = vec![VarKind::NonNegative; n];
    kinds.extend(std::iter::repeat_n(VarKind::Free, k));
    let mut sys = LinearSystem::new(kinds);
    for r in 0..a.nrows() {
        let mut row = to_rational(&a.row(r));
        row.extend(face.columns.iter().map(|&i| q(&a[(r, i)])));
        sys.constrain(row, Relation::Eq, beta[r].clone());
    }
    sys.is_feasible()
}

/// The proper face witnessing `β ∈ DsRes(A)`, if any.
pub fn dsres_face(a: &IntMatrix, lattice: &FaceLattice, beta: &[Rational]) -> Option<Face> {
    lattice
        .proper_faces()
        .iter()
        .find(|f| {
            let integral = quotient_lattice_duals(a, f).iter().all(|y| {
                let v: Rational = y.iter().zip(beta).map(|(s, b)| q(s) * b).sum();
                v.is_integer()
            });
            integral && cone_plus_span(a, f, beta)
        })
        .cloned()
}

/// `β ∈ DsRes(A)`: for a proper face `F`, the class of `β` modulo `Q F`
/// is both integral and in the image of the cone.
pub fn dsres_contains(a: &IntMatrix, beta: &[Rational]) -> Result<bool> {
    check_len(a, beta)?;
    let lattice = face_lattice(a)?;
    Ok(dsres_face(a, &lattice, beta).is_some())
}

/// Whether `(Q+ A + δ)` meets `-t a_j + α + Q F` for a real `t ≥ 1`.
fn translate_meets(a: &IntMatrix, c: &ResonanceComponent, delta: &[Int]) -> bool {
    let n = a.ncols();
    let k = c.face.columns.len();
    let mut kinds = vec![VarKind::NonNegative; n + 1];
    kinds.extend(std::iter::repeat_n(VarKind::Free, k));
    let mut sys = LinearSystem::new(kinds.clone());
    for r in 0..a.nrows() {
        let mut row = to_rational(&a.row(r));
        row.push(q(&c.shift[r]));
        row.extend(c.face.columns.iter().map(|&i| -q(&a[(r, i)])));
        sys.constrain(row, Relation::Eq, q(&(&c.offset[r] - &delta[r])));
    }
    let mut t_row = vec![Rational::zero(); kinds.len()];
    t_row[n] = Rational::one();
    sys.constrain(t_row, Relation::Ge, Rational::one());
    sys.is_feasible()
}

impl ResonanceSet {
    /// Certifies `(R+ A + δ) ∩ sRes(A) = ∅` component by component.
    pub fn delta_is_valid(&self, delta: &[Int]) -> bool {
        self.components.iter().all(|c| !translate_meets(&self.matrix, c, delta))
    }

    /// A point `δ ∈ N A` whose translated cone avoids `sRes(A)`.
    pub fn delta(&self) -> Result<Vec<Int>> {
        let a = &self.matrix;
        let d = a.nrows();
        let cols = a.columns();
        let sum = |vs: &mut dyn Iterator<Item = &Vec<Int>>| {
            vs.fold(vec![Int::zero(); d], |acc, v| acc.iter().zip(v).map(|(x, y)| x + y).collect())
        };
        let interior = sum(&mut cols.iter());
        let offsets: Vec<Vec<Int>> = self.components.iter().map(|c| c.offset.clone()).collect();
        let mut delta: Vec<Int> = interior.iter().zip(sum(&mut offsets.iter())).map(|(x, y)| x + y).collect();
        let mut steps = 0;
        while !self.delta_is_valid(&delta) {
            steps += 1;
            if steps > DELTA_GROWTH_STEPS {
                return Err(GkzError::SearchBoundExceeded("delta".into()));
            }
            delta = delta.iter().zip(&interior).map(|(x, y)| x + y).collect();
        }
        let mut sg = Semigroup::with_lattice(a, &self.lattice)?;
        debug_assert!(sg.contains(&delta));
        // shrink along N A while the certificate survives
        'shrink: loop {
            for col in &cols {
                if col.iter().all(Zero::is_zero) {
                    continue;
                }
                let next: Vec<Int> = delta.iter().zip(col).map(|(x, y)| x - y).collect();
                if sg.contains(&next) && self.delta_is_valid(&next) {
                    delta = next;
                    continue 'shrink;
                }
            }
            break;
        }
        Ok(delta)
    }
}

pub fn delta_a(a: &IntMatrix) -> Result<Vec<Int>> {
    ResonanceSet::new(a)?.delta()
}

/// Every resonant `β_0` over one component of `Ã`, as an upper bound;
/// `Ok(None)` when none is resonant.
fn component_sup(at: &IntMatrix, c: &ResonanceComponent, beta: &[Rational]) -> Result<Option<Rational>> {
    let d = at.nrows();
    // unknowns (β_0, m, g): β_0 e_0 + m ã_j - F g = α - (0, β)
    let mut e0 = vec![Rational::zero(); d];
    e0[0] = Rational::one();
    let mut cols = vec![e0, to_rational(&c.shift)];
    cols.extend(c.face.vectors(at).iter().map(|f| to_rational(f).into_iter().map(|x| -x).collect()));
    let m = Matrix::from_columns(d, &cols);
    let rhs: Vec<Rational> = (0..d)
        .map(|r| q(&c.offset[r]) - if r == 0 { Rational::zero() } else { beta[r - 1].clone() })
        .collect();
    let Some(sol) = solve_affine(&m, &rhs) else { return Ok(None) };
    let proj: Vec<(Rational, Rational)> = sol
        .directions
        .iter()
        .map(|v| (v[0].clone(), v[1].clone()))
        .filter(|(u, w)| !u.is_zero() || !w.is_zero())
        .collect();
    let (b0, m0) = (sol.particular[0].clone(), sol.particular[1].clone());
    let admissible = |m: &Rational| m.is_integer() && *m >= Rational::one();
    let rank = {
        let mut r = proj.len().min(1);
        if let Some((u, w)) = proj.first() {
            if proj.iter().any(|(x, y)| x * w != y * u) {
                r = 2;
            }
        }
        r
    };
    match rank {
        0 => Ok(admissible(&m0).then_some(b0)),
        2 => Err(GkzError::ParameterResonant),
        _ => {
            let (u, w) = proj[0].clone();
            if w.is_zero() {
                // β_0 free with a fixed multiplier
                return if admissible(&m0) { Err(GkzError::ParameterResonant) } else { Ok(None) };
            }
            if u.is_zero() {
                return Ok(Some(b0));
            }
            // β_0 = b0 + (m - m0) u / w over integers m ≥ 1
            let slope = &u / &w;
            if slope.is_positive() {
                return Err(GkzError::ParameterResonant);
            }
            Ok(Some(b0 + (Rational::one() - m0) * slope))
        }
    }
}

/// An integer `n` with `(β_0, β) ∉ sRes(Ã)` for every rational `β_0 ≥ n`.
pub fn n_beta(a: &IntMatrix, beta: &[Rational]) -> Result<BigInt> {
    check_len(a, beta)?;
    if ResonanceSet::new(a)?.contains(beta) {
        return Err(GkzError::ParameterResonant);
    }
    let at = a.homogenize();
    let set = ResonanceSet::new(&at)?;
    let mut sup: Option<Rational> = None;
    for c in &set.components {
        if let Some(s) = component_sup(&at, c, beta)? {
            if sup.as_ref().is_none_or(|cur| s > *cur) {
                sup = Some(s);
            }
        }
    }
    Ok(sup.map_or(BigInt::zero(), |s| s.floor().to_integer() + 1))
}

fn box_shell(d: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-r; d];
    loop {
        if cur.iter().any(|x| x.abs() == r) || r == 0 {
            out.push(cur.clone());
        }
        let mut k = 0;
        loop {
            if k == d {
                return out;
            }
            if cur[k] < r {
                cur[k] += 1;
                break;
            }
            cur[k] = -r;
            k += 1;
        }
    }
}

/// A parameter `β' ≡ -β (mod Z^d)` outside `DsRes(A)`, preferring points of
/// `-(R+ A)°`.
pub fn dual_parameter(a: &IntMatrix, beta: &[Rational]) -> Result<Vec<Rational>> {
    check_len(a, beta)?;
    if homogeneity_vector(a).is_none() {
        return Err(GkzError::NotHomogeneous);
    }
    if ResonanceSet::new(a)?.contains(beta) {
        return Err(GkzError::ParameterResonant);
    }
    let lattice = face_lattice(a)?;
    let d = a.nrows();
    for r in 0..=DUAL_SEARCH_RADIUS {
        let mut shell = box_shell(d, r);
        shell.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), v.clone()));
        let candidates: Vec<Vec<Rational>> = shell
            .iter()
            .map(|alpha| beta.iter().zip(alpha).map(|(b, &x)| -b - Rational::from_integer(x.into())).collect())
            .collect();
        let interior = |c: &Vec<Rational>| {
            let neg: Vec<Rational> = c.iter().map(|x| -x).collect();
            in_cone_interior(a, &neg).unwrap_or(false)
        };
        let pick = candidates
            .iter()
            .filter(|c| interior(c))
            .chain(candidates.iter().filter(|c| !interior(c)))
            .find(|c| dsres_face(a, &lattice, c).is_none());
        if let Some(p) = pick {
            debug_assert!(p.iter().zip(beta).all(|(x, b)| (x + b).is_integer()));
            return Ok(p.clone());
        }
    }
    Err(GkzError::SearchBoundExceeded("dual parameter".into()))
}

/// `β ∈ Z^d`, used for the saturated comparisons.
pub fn integral_point(beta: &[Rational]) -> Option<Vec<Int>> {
    beta.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}
