//! Cross-checks of the exact algorithms against brute-force enumeration.

use std::collections::BTreeSet;

use gkz_core::matrix::IntMatrix;
use gkz_core::poly::{Polynomial, TermOrder};
use gkz_core::polyhedral::{face_lattice, hilbert_basis, in_cone, in_cone_interior, is_saturated, semigroup_contains, support_functions};
use gkz_core::resonance::{dsres_contains, dual_parameter, n_beta, ResonanceSet};
use gkz_core::toric::{a_degree, quasi_degrees, toric_ideal, true_degree_contains, DEFAULT_FILTRATION_BOUND};
use gkz_core::{Int, Rational};
use num_traits::Zero;

fn m(s: &str) -> IntMatrix {
    IntMatrix::parse(s).unwrap()
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

const POINTED: [&str; 6] = ["1", "2 5", "1 1; 0 1", "1 1 1; 0 1 -1", "3 2 0; 1 1 1", "1 1 1; 0 2 5"];

/// All points `A x` with `0 ≤ x_i ≤ k`.
fn brute_semigroup(a: &IntMatrix, k: u32) -> BTreeSet<Vec<Int>> {
    let n = a.ncols();
    let mut out = BTreeSet::new();
    let mut x = vec![0u32; n];
    loop {
        let xi: Vec<Int> = x.iter().map(|&v| Int::from(v)).collect();
        out.insert(a.mul_vec(&xi));
        let Some(i) = (0..n).find(|&i| x[i] < k) else { break };
        x[i] += 1;
        for v in &mut x[..i] {
            *v = 0;
        }
    }
    out
}

fn box_points(d: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let w = (hi - lo + 1) as usize;
    (0..w.pow(d as u32)).map(|idx| (0..d).map(|k| (idx / w.pow(k as u32) % w) as i64 + lo).collect()).collect()
}

#[test]
fn semigroup_membership_matches_enumeration() {
    for s in POINTED {
        let a = m(s);
        let brute = brute_semigroup(&a, 8);
        for p in box_points(a.nrows(), -2, 6) {
            let b = ints(&p);
            // every column has positive first coordinate, so small points need small x
            assert_eq!(semigroup_contains(&a, &b).unwrap(), brute.contains(&b), "{s} at {p:?}");
        }
    }
}

#[test]
fn faces_match_small_functionals() {
    for s in POINTED.iter().chain(&["1 0; 0 1", "1 -1", "1 1 0; 0 1 1"]) {
        let a = m(s);
        let lattice = face_lattice(&a).unwrap();
        let found: BTreeSet<Vec<usize>> = lattice.faces.iter().map(|f| f.columns.clone()).collect();
        for f in &lattice.faces {
            assert!(f.validates(&a), "{s}: certificate of {:?}", f.columns);
        }
        // every small nonnegative functional cuts out a face
        for phi in box_points(a.nrows(), -6, 6) {
            let vals: Vec<Int> = (0..a.ncols()).map(|i| a.column(i).iter().zip(&phi).map(|(x, &y)| x * y).sum()).collect();
            if vals.iter().any(|v| v < &Int::zero()) {
                continue;
            }
            let face: Vec<usize> = (0..a.ncols()).filter(|&i| vals[i].is_zero()).collect();
            assert!(found.contains(&face), "{s}: missing face {face:?}");
        }
    }
}

#[test]
fn support_functions_are_primitive_and_nonnegative() {
    for s in ["1", "1 1; 0 1", "1 1 1; 0 1 -1", "3 2 0; 1 1 1", "1 1 1; 0 2 5"] {
        let a = m(s);
        for sf in support_functions(&a).unwrap() {
            let vals: Vec<Int> = (0..a.ncols()).map(|i| sf.eval(&a.column(i))).collect();
            assert!(vals.iter().all(|v| v >= &Int::zero()));
            let g = vals.iter().fold(Int::zero(), |g, v| num_integer::Integer::gcd(&g, v));
            assert_eq!(g, Int::from(1), "{s}");
            for &i in &sf.facet.columns {
                assert!(vals[i].is_zero());
            }
        }
    }
}

#[test]
fn hilbert_bases_match_enumeration() {
    for s in ["1 1; 0 1", "3 2 0; 1 1 1", "1 1 1; 0 2 5", "2 5", "1 1 1; 0 1 -1"] {
        let a = m(s);
        let hb: BTreeSet<Vec<Int>> = hilbert_basis(&a).unwrap().into_iter().collect();
        // irreducible lattice points of the cone within a box
        let pts: Vec<Vec<Int>> = box_points(a.nrows(), -8, 12)
            .into_iter()
            .map(|p| ints(&p))
            .filter(|p| p.iter().any(|x| !x.is_zero()))
            .filter(|p| in_cone(&a, &p.iter().map(|x| Rational::from_integer(x.clone())).collect::<Vec<_>>()))
            .collect();
        let set: BTreeSet<&Vec<Int>> = pts.iter().collect();
        for p in &pts {
            let reducible = pts.iter().any(|x| {
                let rest: Vec<Int> = p.iter().zip(x).map(|(s, t)| s - t).collect();
                x != p && set.contains(&rest)
            });
            if hb.iter().all(|h| h.iter().all(|x| x.clone() * 2 <= Int::from(12) && x.clone() * 2 >= Int::from(-8))) {
                assert_eq!(!reducible, hb.contains(p), "{s} at {p:?}");
            }
        }
        let sat = hb.iter().all(|h| semigroup_contains(&a, h).unwrap());
        assert_eq!(is_saturated(&a).unwrap(), sat);
    }
}

#[test]
fn toric_ideal_contains_all_small_binomials() {
    for s in ["3 2 0; 1 1 1", "1 1 1; 0 1 -1", "1 1 1 1; 0 1 2 3", "2 5"] {
        let a = m(s);
        let t = toric_ideal(&a, TermOrder::default());
        assert!(t.is_a_homogeneous());
        let n = a.ncols();
        let monos: Vec<Vec<u32>> = box_points(n, 0, 3).into_iter().map(|v| v.into_iter().map(|x| x as u32).collect()).collect();
        let nf: Vec<_> = monos.iter().map(|u| t.normal_form(&Polynomial::monomial(TermOrder::default(), u.clone()))).collect();
        for i in 0..monos.len() {
            for j in i + 1..monos.len() {
                let same = a_degree(&a, &monos[i]) == a_degree(&a, &monos[j]);
                assert_eq!(nf[i] == nf[j], same, "{s}: {:?} {:?}", monos[i], monos[j]);
            }
        }
    }
}

#[test]
fn twisted_cubic_generators() {
    let t = toric_ideal(&m("1 1 1 1; 0 1 2 3"), TermOrder::default());
    assert_eq!(t.generators.len(), 3);
}

#[test]
fn quasi_degree_boxes_for_more_matrices() {
    for s in ["2 5", "1 1 1; 0 1 -1", "1 1 1; 0 2 5", "1 1; 0 1"] {
        let a = m(s);
        for j in 0..a.ncols() {
            let qd = quasi_degrees(&a, j, TermOrder::default(), DEFAULT_FILTRATION_BOUND).unwrap();
            for p in box_points(a.nrows(), -2, 9) {
                let b = ints(&p);
                assert_eq!(qd.contains(&a, &b), true_degree_contains(&a, j, &b).unwrap(), "{s}, column {j}, {p:?}");
            }
        }
    }
}

#[test]
fn quasi_degrees_are_order_independent() {
    let a = m("1 1 1; 0 2 5");
    for j in 0..3 {
        let base = quasi_degrees(&a, j, TermOrder::DegRevLex, DEFAULT_FILTRATION_BOUND).unwrap();
        for order in [TermOrder::DegLex, TermOrder::Lex] {
            let other = quasi_degrees(&a, j, order, DEFAULT_FILTRATION_BOUND).unwrap();
            for p in box_points(2, -1, 9) {
                assert_eq!(base.contains(&a, &ints(&p)), other.contains(&a, &ints(&p)));
            }
        }
    }
}

/// `β ∈ sRes` straight from the definition on a lattice box: some
/// `β + m a_j` with `m ≥ 1` is a quasi-degree, scanned over small `m`.
fn definitional_sres(a: &IntMatrix, beta: &[Int]) -> bool {
    (0..a.ncols()).any(|j| {
        let aj = a.column(j);
        if aj.iter().all(Zero::is_zero) {
            return false;
        }
        let qd = quasi_degrees(a, j, TermOrder::default(), DEFAULT_FILTRATION_BOUND).unwrap();
        (1..=30i64).any(|k| {
            let p: Vec<Int> = beta.iter().zip(&aj).map(|(b, x)| b + Int::from(k) * x).collect();
            qd.components.iter().any(|c| {
                let diff: Vec<Rational> = p.iter().zip(&c.offset).map(|(s, t)| Rational::from_integer(s - t)).collect();
                let dirs: Vec<Vec<Rational>> = c.face.vectors(a).iter().map(|v| v.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
                gkz_core::linalg::in_span(p.len(), &dirs, &diff)
            })
        })
    })
}

#[test]
fn sres_matches_definition_on_lattice_points() {
    for s in ["2 5", "3 2 0; 1 1 1", "1 1 1; 0 2 5"] {
        let a = m(s);
        let set = ResonanceSet::new(&a).unwrap();
        for p in box_points(a.nrows(), -4, 5) {
            let b = ints(&p);
            let beta: Vec<Rational> = p.iter().map(|&x| q(x)).collect();
            assert_eq!(set.contains(&beta), definitional_sres(&a, &b), "{s} at {p:?}");
        }
    }
}

#[test]
fn saturated_cones_avoid_sres() {
    for s in ["1", "1 1; 0 1", "1 1 1; 0 1 -1"] {
        let a = m(s);
        let set = ResonanceSet::new(&a).unwrap();
        for p in box_points(a.nrows(), -6, 12) {
            let beta: Vec<Rational> = p.iter().map(|&x| frac(x, 2)).collect();
            if in_cone(&a, &beta) {
                assert!(!set.contains(&beta), "{s} at {beta:?}");
            }
        }
    }
}

#[test]
fn example_two_sres_line() {
    let a = m("3 2 0; 1 1 1");
    let set = ResonanceSet::new(&a).unwrap();
    for y in -3..=3 {
        assert!(set.contains(&[q(1), frac(y, 3)]), "x = 1 line at y = {y}/3");
    }
    assert!(!set.contains(&[q(0), q(0)]));
}

#[test]
fn dsres_avoids_negative_interior() {
    for s in ["1", "1 1; 0 1", "1 1 1; 0 1 -1", "3 2 0; 1 1 1", "1 1 1; 0 2 5"] {
        let a = m(s);
        for p in box_points(a.nrows(), -8, 8) {
            let beta: Vec<Rational> = p.iter().map(|&x| frac(x, 2)).collect();
            let neg: Vec<Rational> = beta.iter().map(|x| -x).collect();
            if in_cone_interior(&a, &neg).unwrap() {
                assert!(!dsres_contains(&a, &beta).unwrap(), "{s} at {beta:?}");
            }
        }
    }
}

#[test]
fn dual_parameters_satisfy_contract() {
    for s in ["1", "1 1 1; 0 1 -1", "3 2 0; 1 1 1", "1 1 1; 0 2 5"] {
        let a = m(s);
        let set = ResonanceSet::new(&a).unwrap();
        for p in box_points(a.nrows(), -3, 3) {
            let beta: Vec<Rational> = p.iter().map(|&x| frac(x, 3)).collect();
            if set.contains(&beta) {
                continue;
            }
            let dual = dual_parameter(&a, &beta).unwrap();
            assert!(dual.iter().zip(&beta).all(|(x, b)| (x + b).is_integer()));
            assert!(!dsres_contains(&a, &dual).unwrap());
        }
    }
}

#[test]
fn n_beta_spot_checks() {
    for s in ["1", "1 1; 0 1", "3 2 0; 1 1 1", "1 1 1; 0 2 5"] {
        let a = m(s);
        let at = a.homogenize();
        let set = ResonanceSet::new(&a).unwrap();
        let big = ResonanceSet::new(&at).unwrap();
        for p in box_points(a.nrows(), -2, 2) {
            let beta: Vec<Rational> = p.iter().map(|&x| frac(x, 2)).collect();
            if set.contains(&beta) {
                assert!(n_beta(&a, &beta).is_err());
                continue;
            }
            let n = q(i64::try_from(n_beta(&a, &beta).unwrap()).unwrap());
            for extra in [q(0), q(1), frac(7, 2), frac(1, 3), q(10)] {
                let mut full = vec![&n + extra];
                full.extend(beta.iter().cloned());
                assert!(!big.contains(&full), "{s}, beta {beta:?}, beta0 {}", full[0]);
            }
        }
    }
}
