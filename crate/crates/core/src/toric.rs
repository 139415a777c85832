//! The toric ideal `I_A`, true degrees of `S_A / <∂_j>` and their
//! decomposition into translated face semigroups.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{GkzError, Result};
use crate::groebner;
use crate::matrix::{dot, IntMatrix};
use crate::poly::{Monomial, Polynomial, TermOrder};
use crate::polyhedral::{face_lattice, Face, FaceLattice, Semigroup};
use crate::smith::lattice_kernel;
use crate::{Int, Rational};

/// Polynomial in `∂_1..∂_n`, graded by `deg ∂_j = a_j`.
pub type GradedPolynomial = Polynomial<Rational>;

/// Default cap on filtration witness candidates.
pub const DEFAULT_FILTRATION_BOUND: usize = 5_000;

/// `A · u` for an exponent vector.
pub fn a_degree(a: &IntMatrix, u: &[u32]) -> Vec<Int> {
    let v: Vec<Int> = u.iter().map(|&e| BigInt::from(e)).collect();
    a.mul_vec(&v)
}

/// Splits an integer relation into the two exponent vectors of its box
/// operator: `(negative part, positive part)`.
pub fn relation_exponents(l: &[Int]) -> (Monomial, Monomial) {
    let part = |neg: bool| {
        l.iter()
            .map(|x| if x.is_negative() == neg && !x.is_zero() { x.abs().to_u32().expect("exponent fits in u32") } else { 0 })
            .collect()
    };
    (part(true), part(false))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToricIdeal {
    pub matrix: IntMatrix,
    /// Reduced Gröbner basis; every element is a monic binomial.
    pub generators: Vec<GradedPolynomial>,
    pub order: TermOrder,
    pub is_groebner: bool,
}

impl ToricIdeal {
    /// Each generator as its `(leading, trailing)` exponent pair.
    pub fn binomials(&self) -> Vec<(Monomial, Monomial)> {
        self.generators
            .iter()
            .map(|g| {
                let t = g.terms();
                let zero = vec![0; g.nvars()];
                (t[0].0.clone(), t.get(1).map_or(zero, |x| x.0.clone()))
            })
            .collect()
    }

    pub fn normal_form(&self, p: &GradedPolynomial) -> GradedPolynomial {
        groebner::normal_form(&p.with_order(self.order), &self.generators)
    }

    /// Every generator is `∂^u - ∂^v` with `A u = A v`.
    pub fn is_a_homogeneous(&self) -> bool {
        self.generators.iter().all(|g| g.terms().len() == 2 && g.is_homogeneous_by(|m| a_degree(&self.matrix, m)))
    }
}

/// The lattice ideal of `ker_Z(A)`: the binomials of a kernel basis,
/// saturated by the product of all variables.
pub fn toric_ideal(a: &IntMatrix, order: TermOrder) -> ToricIdeal {
    let gens: Vec<GradedPolynomial> = lattice_kernel(a)
        .iter()
        .map(|l| {
            let (neg, pos) = relation_exponents(l);
            Polynomial::binomial(order, neg, pos)
        })
        .collect();
    let generators = groebner::saturate_all(&gens, order);
    ToricIdeal { matrix: a.clone(), generators, order, is_groebner: true }
}

/// Normal form of `p` modulo a toric ideal.
pub fn normal_form(p: &GradedPolynomial, ideal: &ToricIdeal) -> GradedPolynomial {
    ideal.normal_form(p)
}

fn check_column(a: &IntMatrix, j: usize) -> Result<()> {
    if j >= a.ncols() {
        return Err(GkzError::InvalidColumn(j));
    }
    if a.column(j).iter().all(Zero::is_zero) {
        return Err(GkzError::ZeroColumn(j));
    }
    Ok(())
}

/// `u` is a degree of `S_A / <∂_j>`: `u ∈ N A` and `u - a_j ∉ N A`.
pub fn true_degree_contains(a: &IntMatrix, j: usize, u: &[Int]) -> Result<bool> {
    check_column(a, j)?;
    let mut sg = Semigroup::new(a)?;
    Ok(true_degree_in(&mut sg, j, u))
}

pub(crate) fn true_degree_in(sg: &mut Semigroup, j: usize, u: &[Int]) -> bool {
    let aj = sg.matrix().column(j);
    let shifted: Vec<Int> = u.iter().zip(&aj).map(|(x, y)| x - y).collect();
    sg.contains(u) && !sg.contains(&shifted)
}

/// One graded piece `S_F(α)` of a toric filtration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreePair {
    #[serde(serialize_with = "crate::serde_ints")]
    pub offset: Vec<Int>,
    pub face: Face,
}

/// Decomposition of the degrees of `S_A / <∂_j>` into `α_k + N F_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiDegreeSet {
    pub column: usize,
    pub components: Vec<DegreePair>,
}

impl QuasiDegreeSet {
    /// Membership of a lattice point in the union of `α_k + N F_k`.
    pub fn contains(&self, a: &IntMatrix, p: &[Int]) -> bool {
        self.components.iter().any(|c| {
            let diff: Vec<Int> = p.iter().zip(&c.offset).map(|(x, y)| x - y).collect();
            if c.face.columns.is_empty() {
                return diff.iter().all(Zero::is_zero);
            }
            let sub = a.select_columns(&c.face.columns);
            Semigroup::new(&sub).map(|mut s| s.contains(&diff)).unwrap_or(false)
        })
    }
}

/// Enumerates exponent vectors of a fixed weight, variables restricted to
/// `vars` with positive integer weights.
fn monomials_of_weight(n: usize, vars: &[(usize, u64)], weight: u64) -> Vec<Monomial> {
    fn rec(k: usize, left: u64, vars: &[(usize, u64)], cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if k == vars.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let (i, w) = vars[k];
        let mut e = 0u32;
        while (e as u64) * w <= left {
            cur[i] = e;
            rec(k + 1, left - (e as u64) * w, vars, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, weight, vars, &mut vec![0; n], &mut out);
    out
}

struct FacePrime {
    face: Face,
    /// Columns outside the face, i.e. the variables in the prime.
    outside: Vec<usize>,
    basis: Vec<GradedPolynomial>,
}

/// Computes a toric filtration of `S_A / <∂_j>` by repeatedly finding a
/// monomial whose annihilator is the prime of a face, recording its degree
/// and quotienting it out, until the module vanishes.
pub fn quasi_degrees(a: &IntMatrix, j: usize, order: TermOrder, bound: usize) -> Result<QuasiDegreeSet> {
    check_column(a, j)?;
    let lattice = face_lattice(a)?;
    if !lattice.pointed {
        return Err(GkzError::NotPointed);
    }
    let ideal = toric_ideal(a, order);
    quasi_degrees_with(a, j, &lattice, &ideal, bound)
}

pub(crate) fn quasi_degrees_with(
    a: &IntMatrix,
    j: usize,
    lattice: &FaceLattice,
    ideal: &ToricIdeal,
    bound: usize,
) -> Result<QuasiDegreeSet> {
    check_column(a, j)?;
    let n = a.ncols();
    let order = ideal.order;
    let var = |i: usize| {
        let mut e = vec![0; n];
        e[i] = 1;
        GradedPolynomial::monomial(order, e)
    };
    let primes: Vec<FacePrime> = lattice
        .faces
        .iter()
        .filter(|f| !f.contains(j))
        .map(|f| {
            let outside: Vec<usize> = (0..n).filter(|&i| !f.contains(i)).collect();
            let mut gens = ideal.generators.clone();
            gens.extend(outside.iter().map(|&i| var(i)));
            FacePrime { face: f.clone(), outside, basis: groebner::groebner_basis(&gens, order) }
        })
        .collect();

    let grading = &lattice.minimal().certificate;
    let weights: Vec<(usize, u64)> = (0..n)
        .filter_map(|i| {
            let w = dot(grading, &a.column(i));
            w.is_positive().then(|| (i, w.to_u64().expect("grading weight fits in u64")))
        })
        .collect();

    let mut gens = ideal.generators.clone();
    gens.push(var(j));
    let mut current = groebner::groebner_basis(&gens, order);
    let mut components = Vec::new();
    let mut tested = 0usize;

    'filtration: while !groebner::is_unit_ideal(&current) {
        let mut weight = 0u64;
        loop {
            for u in monomials_of_weight(n, &weights, weight) {
                let mono = GradedPolynomial::monomial(order, u.clone());
                if groebner::contains(&current, &mono) {
                    continue;
                }
                tested += 1;
                if tested > bound {
                    return Err(GkzError::FiltrationBoundExceeded(bound));
                }
                // the annihilator contains ∂_i exactly for i off the face
                let killed: Vec<usize> =
                    (0..n).filter(|&i| groebner::contains(&current, &mono.mul(&var(i)))).collect();
                let Some(prime) = primes.iter().find(|p| p.outside == killed) else { continue };
                let ann = groebner::quotient_by_monomial(&current, &u, order);
                if !groebner::same_ideal(&ann, &prime.basis) {
                    continue;
                }
                components.push(DegreePair { offset: a_degree(a, &u), face: prime.face.clone() });
                let mut next = current.clone();
                next.push(mono);
                current = groebner::groebner_basis(&next, order);
                continue 'filtration;
            }
            weight += 1;
        }
    }
    components.sort_by(|x, y| (&x.face.columns, &x.offset).cmp(&(&y.face.columns, &y.offset)));
    Ok(QuasiDegreeSet { column: j, components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn m(s: &str) -> IntMatrix {
        IntMatrix::parse(s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    const O: TermOrder = TermOrder::DegRevLex;

    #[test]
    fn toric_ideal_examples() {
        assert!(toric_ideal(&m("1 1; 0 1"), O).generators.is_empty());
        let t = toric_ideal(&m("1 1 1; 0 1 -1"), O);
        assert_eq!(t.binomials(), vec![(vec![2, 0, 0], vec![0, 1, 1])]);
        let t = toric_ideal(&m("3 2 0; 1 1 1"), O);
        assert_eq!(t.binomials(), vec![(vec![0, 3, 0], vec![2, 0, 1])]);
        assert!(t.is_a_homogeneous());
        assert!(groebner::is_groebner(&t.generators));
    }

    #[test]
    fn printed_generator_is_not_homogeneous() {
        let a = m("3 2 0; 1 1 1");
        assert_ne!(a_degree(&a, &[0, 5, 0]), a_degree(&a, &[3, 0, 2]));
    }

    #[test]
    fn normal_forms() {
        let t = toric_ideal(&m("1 1 1; 0 1 -1"), O);
        let nf = t.normal_form(&GradedPolynomial::monomial(O, vec![2, 0, 0]));
        assert_eq!(nf, GradedPolynomial::monomial(O, vec![0, 1, 1]));
        let one = GradedPolynomial::constant(3, O, BigRational::from_integer(1.into()));
        assert_eq!(t.normal_form(&one), one);
        let a = m("3 2 0; 1 1 1");
        let t = toric_ideal(&a, O);
        let nf = t.normal_form(&GradedPolynomial::monomial(O, vec![0, 3, 0]));
        assert_eq!(nf.terms().len(), 1);
        assert_eq!(a_degree(&a, &nf.terms()[0].0), ints(&[6, 3]));
    }

    #[test]
    fn true_degrees() {
        let a = m("3 2 0; 1 1 1");
        assert!(true_degree_contains(&a, 0, &ints(&[2, 1])).unwrap());
        assert!(!true_degree_contains(&a, 0, &ints(&[3, 1])).unwrap());
        assert!(true_degree_contains(&a, 0, &ints(&[0, 0])).unwrap());
        assert_eq!(true_degree_contains(&a, 5, &ints(&[0, 0])), Err(GkzError::InvalidColumn(5)));
        assert_eq!(true_degree_contains(&m("1 0"), 1, &ints(&[0])), Err(GkzError::ZeroColumn(1)));
    }

    #[test]
    fn quasi_degrees_of_example_two_first_column() {
        let q = quasi_degrees(&m("3 2 0; 1 1 1"), 0, O, DEFAULT_FILTRATION_BOUND).unwrap();
        let got: Vec<(Vec<Int>, Vec<usize>)> = q.components.iter().map(|c| (c.offset.clone(), c.face.columns.clone())).collect();
        assert_eq!(got, vec![(ints(&[0, 0]), vec![2]), (ints(&[2, 1]), vec![2]), (ints(&[4, 2]), vec![2])]);
    }

    #[test]
    fn quasi_degrees_in_dimension_one() {
        let q = quasi_degrees(&m("1"), 0, O, 100).unwrap();
        assert_eq!(q.components.len(), 1);
        assert_eq!(q.components[0].offset, ints(&[0]));
        assert!(q.components[0].face.columns.is_empty());
        let q = quasi_degrees(&m("2 5"), 0, O, 100).unwrap();
        let offs: Vec<Vec<Int>> = q.components.iter().map(|c| c.offset.clone()).collect();
        assert_eq!(offs, vec![ints(&[0]), ints(&[5])]);
    }

    #[test]
    fn filtration_bound_is_enforced() {
        assert_eq!(quasi_degrees(&m("3 2 0; 1 1 1"), 0, O, 1), Err(GkzError::FiltrationBoundExceeded(1)));
    }
}
