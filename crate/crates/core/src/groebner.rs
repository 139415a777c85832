//! Buchberger's algorithm and the ideal operations built on it.

use std::collections::BTreeSet;

use crate::poly::{divides, lcm, quotient, Monomial, Polynomial, TermOrder};
use crate::scalar::Field;

/// Fully reduces `p` modulo `basis`; the remainder is unique when `basis`
/// is a Gröbner basis.
pub fn normal_form<T: Field>(p: &Polynomial<T>, basis: &[Polynomial<T>]) -> Polynomial<T> {
    let (nvars, order) = (p.nvars(), p.order());
    let mut rest = p.clone();
    let mut remainder: Vec<(Monomial, T)> = Vec::new();
    while let Some((m, c)) = rest.terms.first().cloned() {
        match basis.iter().find(|g| g.leading_monomial().is_some_and(|lm| divides(lm, &m))) {
            Some(g) => {
                let lm = g.leading_monomial().unwrap();
                let coef = c / g.leading_coefficient().unwrap().clone();
                rest = rest.sub_scaled(&quotient(&m, lm), &coef, g);
            }
            None => {
                remainder.push((m, c));
                rest.terms.remove(0);
            }
        }
    }
    Polynomial { nvars, order, terms: remainder }
}

pub fn s_polynomial<T: Field>(f: &Polynomial<T>, g: &Polynomial<T>) -> Polynomial<T> {
    let (fm, gm) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let l = lcm(fm, gm);
    let a = f.mul_term(&quotient(&l, fm), &(T::one() / f.leading_coefficient().unwrap().clone()));
    a.sub_scaled(&quotient(&l, gm), &(T::one() / g.leading_coefficient().unwrap().clone()), g)
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// The reduced Gröbner basis of the ideal generated by `gens`, under
/// `order`, sorted by decreasing leading monomial.
pub fn groebner_basis<T: Field>(gens: &[Polynomial<T>], order: TermOrder) -> Vec<Polynomial<T>> {
    let mut basis: Vec<Polynomial<T>> =
        gens.iter().map(|g| g.with_order(order)).filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    while !pending.is_empty() {
        // normal selection strategy: smallest lcm first
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = lcm(basis[a.0].leading_monomial().unwrap(), basis[a.1].leading_monomial().unwrap());
                let lb = lcm(basis[b.0].leading_monomial().unwrap(), basis[b.1].leading_monomial().unwrap());
                order.cmp(&la, &lb)
            })
            .unwrap();
        pending.remove(&(i, j));
        done.insert((i, j));
        let (li, lj) = (basis[i].leading_monomial().unwrap().clone(), basis[j].leading_monomial().unwrap().clone());
        if coprime(&li, &lj) {
            continue;
        }
        let l = lcm(&li, &lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(basis[k].leading_monomial().unwrap(), &l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let r = normal_form(&s_polynomial(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(r.monic());
            for i in 0..k {
                pending.insert((i, k));
            }
        }
    }
    reduce_basis(basis)
}

/// Turns a Gröbner basis into the reduced one.
pub fn reduce_basis<T: Field>(mut basis: Vec<Polynomial<T>>) -> Vec<Polynomial<T>> {
    basis.retain(|g| !g.is_zero());
    let order = match basis.first() {
        Some(g) => g.order(),
        None => return basis,
    };
    basis.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    let mut minimal: Vec<Polynomial<T>> = Vec::new();
    for g in basis {
        let lm = g.leading_monomial().unwrap();
        if !minimal.iter().any(|h| divides(h.leading_monomial().unwrap(), lm)) {
            minimal.push(g);
        }
    }
    let mut reduced: Vec<Polynomial<T>> = (0..minimal.len())
        .map(|k| {
            let others: Vec<Polynomial<T>> =
                minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, g)| g.clone()).collect();
            let g = &minimal[k];
            let lead = Polynomial::from_terms(g.nvars(), order, vec![g.terms[0].clone()]);
            let tail = Polynomial { nvars: g.nvars(), order, terms: g.terms[1..].to_vec() };
            lead.add(&normal_form(&tail, &others)).monic()
        })
        .collect();
    reduced.sort_by(|a, b| order.cmp(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()));
    reduced
}

/// Buchberger's criterion: every S-polynomial reduces to zero.
pub fn is_groebner<T: Field>(basis: &[Polynomial<T>]) -> bool {
    (0..basis.len()).all(|j| (0..j).all(|i| normal_form(&s_polynomial(&basis[i], &basis[j]), basis).is_zero()))
}

pub fn contains<T: Field>(gb: &[Polynomial<T>], p: &Polynomial<T>) -> bool {
    normal_form(&p.with_order(gb.first().map_or(p.order(), |g| g.order())), gb).is_zero()
}

pub fn is_unit_ideal<T: Field>(gb: &[Polynomial<T>]) -> bool {
    gb.iter().any(|g| g.leading_monomial().is_some_and(|m| m.iter().all(|&e| e == 0)))
}

/// Intersects with the subring not involving the first `block` variables,
/// given a Gröbner basis under an order eliminating them.
fn eliminate<T: Field>(gb: &[Polynomial<T>], block: usize, order: TermOrder) -> Vec<Polynomial<T>> {
    gb.iter()
        .filter(|g| g.terms().iter().all(|(m, _)| m[..block].iter().all(|&e| e == 0)))
        .map(|g| g.drop_leading_vars(block, order))
        .collect()
}

/// `(I : x_var^∞)` via `I + <t x_var - 1>` and elimination of `t`.
pub fn saturate_variable<T: Field>(gens: &[Polynomial<T>], var: usize, order: TermOrder) -> Vec<Polynomial<T>> {
    let Some(n) = gens.first().map(Polynomial::nvars) else { return Vec::new() };
    let elim = TermOrder::Elimination { block: 1 };
    let mut lifted: Vec<Polynomial<T>> = gens.iter().map(|g| g.prepend_vars(1, elim)).collect();
    let mut tx = vec![0; n + 1];
    tx[0] = 1;
    tx[var + 1] = 1;
    lifted.push(Polynomial::from_terms(n + 1, elim, vec![(tx, T::one()), (vec![0; n + 1], -T::one())]));
    let gb = groebner_basis(&lifted, elim);
    groebner_basis(&eliminate(&gb, 1, order), order)
}

/// `(I : (x_0 ... x_{n-1})^∞)`, one variable at a time.
pub fn saturate_all<T: Field>(gens: &[Polynomial<T>], order: TermOrder) -> Vec<Polynomial<T>> {
    let Some(n) = gens.first().map(Polynomial::nvars) else { return Vec::new() };
    let mut cur = groebner_basis(gens, order);
    for var in 0..n {
        if cur.is_empty() || is_unit_ideal(&cur) {
            break;
        }
        cur = saturate_variable(&cur, var, order);
    }
    cur
}

/// `(I : x^u)` via `I ∩ <x^u>` computed by elimination.
pub fn quotient_by_monomial<T: Field>(gens: &[Polynomial<T>], u: &[u32], order: TermOrder) -> Vec<Polynomial<T>> {
    let n = u.len();
    let elim = TermOrder::Elimination { block: 1 };
    let mut lifted: Vec<Polynomial<T>> = Vec::new();
    let mut t = vec![0; n + 1];
    t[0] = 1;
    for g in gens {
        lifted.push(g.prepend_vars(1, elim).mul_term(&t, &T::one()));
    }
    // (1 - t) x^u
    let mut xu = vec![0];
    xu.extend_from_slice(u);
    let mut txu = xu.clone();
    txu[0] = 1;
    lifted.push(Polynomial::from_terms(n + 1, elim, vec![(xu, T::one()), (txu, -T::one())]));
    let gb = groebner_basis(&lifted, elim);
    let divided: Vec<Polynomial<T>> = eliminate(&gb, 1, order)
        .into_iter()
        .map(|g| {
            let terms = g.terms().iter().map(|(m, c)| (quotient(m, u), c.clone())).collect();
            Polynomial::from_terms(n, order, terms)
        })
        .collect();
    groebner_basis(&divided, order)
}

/// Equality of ideals given by reduced Gröbner bases under the same order.
pub fn same_ideal<T: Field>(a: &[Polynomial<T>], b: &[Polynomial<T>]) -> bool {
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type P = Polynomial<BigRational>;
    const O: TermOrder = TermOrder::DegRevLex;

    fn bin(u: &[u32], v: &[u32]) -> P {
        P::binomial(O, u.to_vec(), v.to_vec())
    }

    #[test]
    fn twisted_cubic() {
        // kernel of (3 2 1 0; 0 1 2 3)
        let gens = vec![bin(&[1, 0, 1, 0], &[0, 2, 0, 0]), bin(&[0, 1, 0, 1], &[0, 0, 2, 0])];
        let sat = saturate_all(&gens, O);
        assert!(is_groebner(&sat));
        assert_eq!(sat.len(), 3);
        assert!(contains(&sat, &bin(&[1, 0, 0, 1], &[0, 1, 1, 0])));
        // the unsaturated ideal misses it
        let gb = groebner_basis(&gens, O);
        assert!(!contains(&gb, &bin(&[1, 0, 0, 1], &[0, 1, 1, 0])));
    }

    #[test]
    fn reduction_step() {
        let gb = groebner_basis(&[bin(&[2, 0, 0], &[0, 1, 1])], O);
        let nf = normal_form(&P::monomial(O, vec![2, 0, 0]), &gb);
        assert_eq!(nf, P::monomial(O, vec![0, 1, 1]));
        let one = P::constant(3, O, BigRational::from_integer(1.into()));
        assert_eq!(normal_form(&one, &gb), one);
    }

    #[test]
    fn monomial_quotient() {
        // <x1, x2^3> : x2^2 = <x1, x2>
        let gens = vec![P::monomial(O, vec![1, 0, 0]), P::monomial(O, vec![0, 3, 0])];
        let q = quotient_by_monomial(&gens, &[0, 2, 0], O);
        let expected = groebner_basis(&[P::monomial(O, vec![1, 0, 0]), P::monomial(O, vec![0, 1, 0])], O);
        assert!(same_ideal(&q, &expected));
        // quotient by 1 is the ideal itself
        let gb = groebner_basis(&gens, O);
        assert!(same_ideal(&quotient_by_monomial(&gens, &[0, 0, 0], O), &gb));
    }

    #[test]
    fn unit_ideal_detection() {
        let gens = vec![bin(&[1, 0], &[0, 0]), P::monomial(O, vec![1, 0])];
        assert!(is_unit_ideal(&groebner_basis(&gens, O)));
    }
}
