//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use gkz_core::family::{factor_b, index_sets, psi_equivariant, psi_image, psi_kernel_sections, FormalSection, IndexKind};
use gkz_core::matrix::IntMatrix;
use gkz_core::poly::{Polynomial, TermOrder};
use gkz_core::polyhedral::{in_cone, semigroup_contains, Semigroup};
use gkz_core::resonance::{delta_a, dual_parameter, ResonanceSet};
use gkz_core::smith::{smith_decompose, lattice_kernel};
use gkz_core::toric::{a_degree, quasi_degrees, toric_ideal, DEFAULT_FILTRATION_BOUND};
use gkz_core::weyl::{euler_decomposition, gkz_presentation, ideal_member_bounded, WeylElement, WeylOperator};
use gkz_core::{Int, Rational};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

fn m(s: &str) -> IntMatrix {
    IntMatrix::parse(s).unwrap()
}

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn example_one() -> Check {
    let a = m("1");
    let set = ResonanceSet::new(&a).map_err(|e| e.to_string())?;
    for b in -3..=3 {
        ensure(set.contains(&[q(b)]) == (b < 0), format!("sres({b})"))?;
    }
    ensure(dual_parameter(&a, &[q(0)]).map_err(|e| e.to_string())? == vec![q(-1)], "dual parameter of 0")?;
    for beta in [q(0), q(2), Rational::new(1.into(), 3.into())] {
        let p = gkz_presentation(&a, std::slice::from_ref(&beta), TermOrder::default()).map_err(|e| e.to_string())?;
        let expected = WeylOperator::parse("l0*d0", Some(1)).unwrap().sub(&WeylElement::constant(1, beta.clone())).unwrap();
        ensure(p.boxes.is_empty() && p.eulers == vec![expected], format!("presentation at {beta}"))?;
    }
    Ok(())
}

fn example_two_toric() -> Check {
    let a = m("3 2 0; 1 1 1");
    let order = TermOrder::default();
    let t = toric_ideal(&a, order);
    ensure(t.generators.len() == 1, "one binomial generator")?;
    ensure(t.binomials() == vec![(vec![0, 3, 0], vec![2, 0, 1])], "generator d1^3 - d0^2 d2")?;
    // the printed relation (3,-5,2) is not a relation among the columns
    let printed = ints(&[3, -5, 2]);
    ensure(a.mul_vec(&printed) == ints(&[-1, 0]), "printed relation has A l = (-1, 0)")?;
    ensure(lattice_kernel(&a) == vec![ints(&[2, -3, 1])], "kernel basis")?;

    let kernel = ints(&[2, -3, 1]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut equal_degree = 0;
    for _ in 0..200 {
        let u: Vec<u32> = (0..3).map(|_| rng.gen_range(0..6)).collect();
        let v: Vec<u32> = if rng.gen_bool(0.5) {
            // move along the kernel while staying nonnegative
            let k: i64 = rng.gen_range(-2..=2);
            let w: Vec<i64> = u.iter().zip(&kernel).map(|(&x, l)| x as i64 + k * i64::try_from(l).unwrap()).collect();
            if w.iter().any(|&x| x < 0) {
                u.clone()
            } else {
                w.iter().map(|&x| x as u32).collect()
            }
        } else {
            (0..3).map(|_| rng.gen_range(0..6)).collect()
        };
        let nu = t.normal_form(&Polynomial::monomial(order, u.clone()));
        let nv = t.normal_form(&Polynomial::monomial(order, v.clone()));
        let same = a_degree(&a, &u) == a_degree(&a, &v);
        equal_degree += same as usize;
        ensure((nu == nv) == same, format!("grading oracle at {u:?} {v:?}"))?;
    }
    ensure(equal_degree > 50, "oracle sampled enough equal-degree pairs")
}

fn quasi_degree_boxes() -> Check {
    let a = m("3 2 0; 1 1 1");
    let mut sg = Semigroup::new(&a).map_err(|e| e.to_string())?;
    for j in 0..3 {
        let qd = quasi_degrees(&a, j, TermOrder::default(), DEFAULT_FILTRATION_BOUND).map_err(|e| e.to_string())?;
        let aj = a.column(j);
        for x in -1..=9i64 {
            for y in -1..=5i64 {
                let p = ints(&[x, y]);
                let shifted: Vec<Int> = p.iter().zip(&aj).map(|(s, t)| s - t).collect();
                let truth = sg.contains(&p) && !sg.contains(&shifted);
                ensure(qd.contains(&a, &p) == truth, format!("column {j}, point ({x},{y})"))?;
            }
        }
        if j == 0 {
            let lines: Vec<(Int, Vec<usize>)> = qd.components.iter().map(|c| (c.offset[0].clone(), c.face.columns.clone())).collect();
            ensure(lines == vec![(Int::from(0), vec![2]), (Int::from(2), vec![2]), (Int::from(4), vec![2])], "vertical lines x = 0, 2, 4")?;
        }
    }
    Ok(())
}

fn saturated_law() -> Check {
    for s in ["1", "1 1; 0 1", "1 1 1; 0 1 -1"] {
        let a = m(s);
        let set = ResonanceSet::new(&a).map_err(|e| e.to_string())?;
        let d = a.nrows();
        let total = 11usize.pow(d as u32);
        for idx in 0..total {
            let p: Vec<i64> = (0..d).map(|k| (idx / 11usize.pow(k as u32) % 11) as i64 - 5).collect();
            let b = ints(&p);
            let beta: Vec<Rational> = p.iter().map(|&x| q(x)).collect();
            let member = semigroup_contains(&a, &b).map_err(|e| e.to_string())?;
            ensure(set.contains(&beta) == !member, format!("{s} at {p:?}"))?;
        }
    }
    Ok(())
}

fn delta_checks() -> Check {
    let a = m("2 5");
    let set = ResonanceSet::new(&a).map_err(|e| e.to_string())?;
    ensure(set.contains(&[q(3)]), "3 is strongly resonant for (2,5)")?;
    ensure(in_cone(&a, &[q(3)]), "3 lies in the cone")?;
    ensure(!set.delta_is_valid(&ints(&[0])), "delta = 0 rejected")?;
    let d = delta_a(&a).map_err(|e| e.to_string())?;
    ensure(semigroup_contains(&a, &d).unwrap() && set.delta_is_valid(&d), format!("delta {d:?} certified"))?;
    ensure(set.delta_is_valid(&ints(&[4])), "4 certified")?;

    let a = m("3 2 0; 1 1 1");
    let set = ResonanceSet::new(&a).map_err(|e| e.to_string())?;
    ensure(set.delta_is_valid(&ints(&[4, 2])), "(4,2) certified")?;
    let d = set.delta().map_err(|e| e.to_string())?;
    ensure(semigroup_contains(&a, &d).unwrap() && set.delta_is_valid(&d), format!("delta {d:?} certified"))
}

fn dual_identity() -> Check {
    let p = gkz_presentation(&m("1 1 1; 0 1 -1"), &[q(0), q(0)], TermOrder::default()).map_err(|e| e.to_string())?;
    let gens = p.generators();
    let expected: Vec<WeylOperator> =
        ["d0^2 - d1*d2", "l0*d0 + l1*d1 + l2*d2", "l1*d1 - l2*d2"].iter().map(|s| WeylOperator::parse(s, Some(3)).unwrap()).collect();
    ensure(gens == expected, "generators")?;
    // sign-corrected inverse of d0; the printed sign leaves the residual 2 l0 d0
    let target = WeylOperator::parse("d0*((4*l1*l2 - l0^2)*d0 + l0) - 1", Some(3)).unwrap();
    let cert = ideal_member_bounded(&target, &gens, 4).map_err(|e| e.to_string())?.ok_or("no certificate at bound 4")?;
    ensure(cert.cofactors.iter().all(|c| c.total_degree().unwrap_or(0) <= 4), "cofactor degrees")?;
    ensure(cert.expand(&gens).unwrap().sub(&target).unwrap().is_zero(), "zero residual")?;
    let printed = WeylOperator::parse("d0*((l0^2 - 4*l1*l2)*d0 + l0) - 1", Some(3)).unwrap();
    let residual = printed.sub(&WeylOperator::parse("2*l0*d0", Some(3)).unwrap()).unwrap();
    let cert = ideal_member_bounded(&residual, &gens, 4).map_err(|e| e.to_string())?.ok_or("printed residual")?;
    ensure(cert.expand(&gens).unwrap() == residual, "printed form differs by exactly 2 l0 d0")
}

fn smith_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 100 {
        let d = rng.gen_range(1..=3);
        let n = rng.gen_range(d..=5);
        let b = IntMatrix::from_fn(d, n, |_, _| Int::from(rng.gen_range(-6..=6)));
        let Ok(s) = smith_decompose(&b) else { continue };
        done += 1;
        ensure(s.product() == b, format!("product identity for {b}"))?;
        ensure(s.c.determinant().abs().is_one() && s.m.determinant().abs().is_one(), format!("unimodularity for {b}"))?;
        ensure(s.divisors.iter().all(|e| e.is_positive()), "positive divisors")?;
        ensure(s.divisors.windows(2).all(|w| w[1].is_multiple_of(&w[0])), format!("divisibility chain for {b}"))?;
    }
    Ok(())
}

fn psi_suite() -> Check {
    ensure(psi_image(&ints(&[0, 0]), &Int::zero()).exponents == ints(&[1, 0, 0]), "psi(omega_0) = d0")?;
    for a in [m("1 1 1; 0 1 -1").dehomogenize().unwrap(), m("3 2 0; 1 1 1"), m("1 1; 0 1")] {
        let at = a.homogenize();
        let zero = vec![Rational::zero(); at.nrows()];
        let eulers = gkz_presentation(&at, &zero, TermOrder::default()).map_err(|e| e.to_string())?.eulers;
        let sections = psi_kernel_sections(&a);
        ensure(sections.len() == a.nrows(), "d kernel sections")?;
        for s in &sections {
            let c = ideal_member_bounded(s, &eulers, 0).map_err(|e| e.to_string())?;
            ensure(c.is_some(), format!("section {s} reduces to zero"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let x = FormalSection {
            coefficient: Int::from(rng.gen_range(1..=5)),
            lambda: (0..n).map(|_| rng.gen_range(0..3)).collect(),
            m: (0..n).map(|_| Int::from(rng.gen_range(-3..=3))).collect(),
            s: Int::from(rng.gen_range(0..4)),
        };
        for i in 0..=n {
            ensure(psi_equivariant(&x, i), format!("equivariance for {x:?} at {i}"))?;
        }
    }
    Ok(())
}

fn index_set_suite() -> Check {
    // e = (2,3) is realised by diag(2,3), whose Smith divisors are (1,6)
    for (b, count) in [("1", 1), ("2", 2), ("2 0; 0 3", 6)] {
        let b = m(b);
        let fam = factor_b(&b).map_err(|e| e.to_string())?;
        ensure(fam.class_count() == Int::from(count), "class count")?;
        let at = fam.a.homogenize();
        let set = ResonanceSet::new(&at).map_err(|e| e.to_string())?;
        for kind in [IndexKind::Resonance, IndexKind::Dual] {
            let is = index_sets(&b, kind).map_err(|e| e.to_string())?;
            ensure(is.members.len() == count, format!("|I| for {b}"))?;
            for (i, x) in is.members.iter().enumerate() {
                for y in &is.members[i + 1..] {
                    let congruent = x.member.iter().zip(&y.member).all(|(s, t)| (s - t).is_integer());
                    ensure(!congruent, "members pairwise incongruent")?;
                }
                let ok = match kind {
                    IndexKind::Resonance => !set.contains(&x.member),
                    IndexKind::Dual => !gkz_core::resonance::dsres_contains(&at, &x.member).unwrap(),
                };
                ensure(ok, format!("member {:?} passes its non-resonance test", x.member))?;
            }
        }
    }
    Ok(())
}

fn monodromicity() -> Check {
    let check = |a: &IntMatrix, h: &[Int]| -> Check {
        let n = a.ncols();
        let mut lhs = WeylOperator::zero(n);
        for (k, hk) in h.iter().enumerate() {
            for i in 0..n {
                let t = WeylOperator::lambda(n, i).mul(&WeylOperator::del(n, i)).unwrap();
                lhs = lhs.add(&t.scale(&Rational::from_integer(hk * &a[(k, i)]))).unwrap();
            }
        }
        let mut total = WeylOperator::zero(n);
        for i in 0..n {
            total = total.add(&WeylOperator::lambda(n, i).mul(&WeylOperator::del(n, i)).unwrap()).unwrap();
        }
        ensure(lhs == total, format!("symbolic identity for {a}"))
    };
    let a = m("3 2 0; 1 1 1");
    let h = euler_decomposition(&a).ok_or("Example II is homogeneous")?.h;
    ensure(h == ints(&[0, 1]), "h = (0,1)")?;
    check(&a, &h)?;
    for s in ["1", "3 2 0; 1 1 1", "1 -1", "2 5", "1 2 3; 4 5 7"] {
        let at = m(s).homogenize();
        let h = euler_decomposition(&at).ok_or("homogenized matrices are homogeneous")?.h;
        let mut e = vec![Int::zero(); at.nrows()];
        e[0] = Int::one();
        ensure(h == e, format!("h = (1,0,...) for {at}"))?;
        check(&at, &h)?;
    }
    ensure(euler_decomposition(&m("2 5")).is_none(), "(2,5) is not homogeneous")
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 10] = [
        ("Example I suite", example_one, Duration::from_secs(1)),
        ("Example II toric ideal and grading oracle", example_two_toric, Duration::from_secs(5)),
        ("quasi-degree box oracle", quasi_degree_boxes, Duration::from_secs(10)),
        ("saturated-homogeneous law", saturated_law, Duration::from_secs(10)),
        ("delta_A and the (2,5) counterexample", delta_checks, Duration::from_secs(5)),
        ("dual-identity certificate", dual_identity, Duration::from_secs(30)),
        ("Smith property suite", smith_suite, Duration::from_secs(30)),
        ("psi suite", psi_suite, Duration::from_secs(5)),
        ("index sets", index_set_suite, Duration::from_secs(10)),
        ("homogeneity and monodromicity", monodromicity, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        // time limits are for optimized builds; debug builds get a wide margin
        let slack = if cfg!(debug_assertions) { 10 } else { 1 };
        let outcome = outcome.and_then(|_| ensure(elapsed <= *limit * slack, format!("took {elapsed:?}")));
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({:.2?})", i + 1, elapsed),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
