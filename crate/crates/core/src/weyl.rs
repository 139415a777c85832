//! The Weyl algebra `Q[λ_1..λ_N]<∂_1..∂_N>` in normally ordered form, GKZ
//! presentations, and bounded left ideal membership certificates.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{GkzError, Result};
use crate::linalg::{nullspace, solve_affine};
use crate::matrix::{IntMatrix, Matrix};
use crate::poly::{Monomial, TermOrder};
use crate::scalar::Field;
use crate::smith::homogeneity_vector;
use crate::toric::toric_ideal;
use crate::{Int, Rational};

/// Exponents of `λ^u ∂^v`, stored as `(u, v)`.
pub type WeylMonomial = (Monomial, Monomial);

/// An element of the Weyl algebra with every `λ` left of every `∂`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement<T> {
    nvars: usize,
    terms: BTreeMap<WeylMonomial, T>,
}

pub type WeylOperator = WeylElement<Rational>;

fn falling(c: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(c - i))
}

fn binomial(n: u32, k: u32) -> BigInt {
    falling(n, k) / falling(k, k)
}

/// `∂^b λ^c = Σ_k C(b,k) c!/(c-k)! λ^{c-k} ∂^{b-k}` in one variable.
fn commute_one(b: u32, c: u32) -> Vec<(u32, u32, BigInt)> {
    (0..=b.min(c)).map(|k| (c - k, b - k, binomial(b, k) * falling(c, k))).collect()
}

impl<T: Field> WeylElement<T> {
    pub fn zero(nvars: usize) -> Self {
        WeylElement { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::term(nvars, vec![0; nvars], vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, T::one())
    }

    pub fn term(nvars: usize, lambda: Monomial, del: Monomial, c: T) -> Self {
        assert!(lambda.len() == nvars && del.len() == nvars, "exponent length mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((lambda, del), c);
        }
        WeylElement { nvars, terms }
    }

    pub fn lambda(nvars: usize, i: usize) -> Self {
        let mut u = vec![0; nvars];
        u[i] = 1;
        Self::term(nvars, u, vec![0; nvars], T::one())
    }

    pub fn del(nvars: usize, i: usize) -> Self {
        let mut v = vec![0; nvars];
        v[i] = 1;
        Self::term(nvars, vec![0; nvars], v, T::one())
    }

    /// `∂^v` as an operator.
    pub fn del_monomial(v: Monomial) -> Self {
        let n = v.len();
        Self::term(n, vec![0; n], v, T::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<WeylMonomial, T> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `|u| + |v|` over the terms; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(u, v)| u.iter().chain(v).sum()).max()
    }

    fn add_term(&mut self, key: WeylMonomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x = x.clone() + c;
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(GkzError::VariableMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        WeylElement { nvars: self.nvars, terms: self.terms.iter().map(|(k, x)| (k.clone(), x.clone() * c.clone())).collect() }
    }

    /// Normally ordered product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.nvars;
        let mut out = Self::zero(n);
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                let coeff = x.clone() * y.clone();
                // expand ∂^b λ^c one variable at a time
                let mut partial: Vec<(Monomial, Monomial, BigInt)> = vec![(a.clone(), vec![0; n], BigInt::one())];
                for i in 0..n {
                    let pieces = commute_one(b[i], c[i]);
                    let mut next = Vec::with_capacity(partial.len() * pieces.len());
                    for (u, v, k) in &partial {
                        for &(lc, db, ref w) in &pieces {
                            let mut u2 = u.clone();
                            let mut v2 = v.clone();
                            u2[i] += lc;
                            v2[i] = db + d[i];
                            next.push((u2, v2, k * w));
                        }
                    }
                    partial = next;
                }
                for (u, v, k) in partial {
                    out.add_term((u, v), coeff.clone() * T::from_bigint(&k));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Embeds into `nvars` variables, keeping indices.
    pub fn widen(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let pad = |m: &Monomial| {
            let mut m = m.clone();
            m.resize(nvars, 0);
            m
        };
        WeylElement { nvars, terms: self.terms.iter().map(|((u, v), c)| ((pad(u), pad(v)), c.clone())).collect() }
    }

    /// Shifts variable `i` to `i + offset` inside `nvars` variables.
    pub fn shift_vars(&self, offset: usize, nvars: usize) -> Self {
        assert!(self.nvars + offset <= nvars);
        let mv = |m: &Monomial| {
            let mut out = vec![0; nvars];
            out[offset..offset + m.len()].copy_from_slice(m);
            out
        };
        WeylElement { nvars, terms: self.terms.iter().map(|((u, v), c)| ((mv(u), mv(v)), c.clone())).collect() }
    }

    /// The `Z^d` degree with `deg λ_j = -a_j`, `deg ∂_j = a_j`, if every
    /// term has the same one.
    pub fn a_degree(&self, a: &IntMatrix) -> Option<Vec<Int>> {
        let mut degs = self.terms.keys().map(|(u, v)| {
            (0..a.nrows())
                .map(|r| (0..self.nvars).map(|i| &a[(r, i)] * (BigInt::from(v[i]) - BigInt::from(u[i]))).sum::<Int>())
                .collect::<Vec<Int>>()
        });
        let first = degs.next().unwrap_or_else(|| vec![Int::zero(); a.nrows()]);
        degs.all(|x| x == first).then_some(first)
    }

    /// Whether the element involves `λ_i`, respectively `∂_i`.
    pub fn uses_lambda(&self, i: usize) -> bool {
        self.terms.keys().any(|(u, _)| u[i] > 0)
    }

    pub fn uses_del(&self, i: usize) -> bool {
        self.terms.keys().any(|(_, v)| v[i] > 0)
    }
}

impl<T: Field> fmt::Display for WeylElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest total degree first
        let mut keys: Vec<&WeylMonomial> = self.terms.keys().collect();
        keys.sort_by_key(|(u, v)| std::cmp::Reverse(u.iter().chain(v.iter()).sum::<u32>()));
        for (idx, key) in keys.into_iter().enumerate() {
            let c = &self.terms[key];
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            for (name, exps) in [("l", &key.0), ("d", &key.1)] {
                for (i, &e) in exps.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(format!("{name}{i}")),
                        _ => factors.push(format!("{name}{i}^{e}")),
                    }
                }
            }
            let is_one = abs == T::one();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if is_one {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Serialize for WeylElement<Rational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    nvars: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> GkzError {
        GkzError::Parse(format!("{msg} in operator {:?}", self.src))
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().map(|&(_, c)| c)
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            s.push(c);
            self.chars.next();
        }
        s.parse().map_err(|_| self.err("expected a number"))
    }

    fn big(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            s.push(c);
            self.chars.next();
        }
        s.parse().map_err(|_| self.err("expected a number"))
    }

    fn expr(&mut self) -> Result<WeylOperator> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.chars.next();
                self.term()?.scale(&-Rational::one())
            }
            Some('+') => {
                self.chars.next();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.chars.next();
                    acc = acc.add(&self.term()?)?;
                }
                Some('-') => {
                    self.chars.next();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<WeylOperator> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.chars.next();
                    acc = acc.mul(&self.factor()?)?;
                }
                Some('/') => {
                    self.chars.next();
                    let den = self.big()?;
                    if den.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.scale(&Rational::new(BigInt::one(), den));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<WeylOperator> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.chars.next();
            let e = self.number()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<WeylOperator> {
        let n = self.nvars;
        match self.peek() {
            Some('(') => {
                self.chars.next();
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.chars.next();
                Ok(e)
            }
            Some(c @ ('l' | 'd')) => {
                self.chars.next();
                let i = self.number()? as usize;
                if i >= n {
                    return Err(self.err(&format!("variable index {i} out of range")));
                }
                Ok(if c == 'l' { WeylElement::lambda(n, i) } else { WeylElement::del(n, i) })
            }
            Some(c) if c.is_ascii_digit() => Ok(WeylElement::constant(n, Rational::from_integer(self.big()?))),
            Some(c) => Err(self.err(&format!("unexpected character {c:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn max_index(src: &str) -> Option<usize> {
    let b = src.as_bytes();
    let mut best = None;
    let mut i = 0;
    while i < b.len() {
        if (b[i] == b'l' || b[i] == b'd') && b.get(i + 1).is_some_and(u8::is_ascii_digit) {
            let mut j = i + 1;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            let k: usize = src[i + 1..j].parse().ok()?;
            best = Some(best.map_or(k, |x: usize| x.max(k)));
            i = j;
        } else {
            i += 1;
        }
    }
    best
}

impl WeylOperator {
    /// Parses syntax such as `3*l0^2*d0 - 4*l1*l2*d0^2 + 1/2*l0`; `l<i>` is
    /// `λ_i` and `d<i>` is `∂_i`. Without `nvars` the count is inferred
    /// from the largest index.
    pub fn parse(src: &str, nvars: Option<usize>) -> Result<Self> {
        let n = nvars.unwrap_or_else(|| max_index(src).map_or(1, |k| k + 1));
        let mut p = Parser { chars: src.char_indices().peekable(), src, nvars: n };
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

/// `a · b` in normal order.
pub fn weyl_mul<T: Field>(a: &WeylElement<T>, b: &WeylElement<T>) -> Result<WeylElement<T>> {
    a.mul(b)
}

/// `Σ_i a_{ki} λ_i ∂_i` over `nvars` variables, column `i` acting on
/// variable `i + offset`.
fn euler_field(a: &IntMatrix, k: usize, offset: usize, nvars: usize) -> WeylOperator {
    let mut e = WeylElement::zero(nvars);
    for i in 0..a.ncols() {
        let mut u = vec![0; nvars];
        u[i + offset] = 1;
        e.add_term((u.clone(), u), Rational::from_integer(a[(k, i)].clone()));
    }
    e
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GkzPresentation {
    #[serde(skip)]
    pub matrix: IntMatrix,
    #[serde(serialize_with = "crate::serde_rationals")]
    pub beta: Vec<Rational>,
    pub boxes: Vec<WeylOperator>,
    pub eulers: Vec<WeylOperator>,
}

impl GkzPresentation {
    pub fn generators(&self) -> Vec<WeylOperator> {
        self.boxes.iter().chain(&self.eulers).cloned().collect()
    }
}

fn box_operators(a: &IntMatrix, order: TermOrder) -> Vec<WeylOperator> {
    toric_ideal(a, order)
        .binomials()
        .into_iter()
        .map(|(u, v)| {
            WeylElement::del_monomial(u).sub(&WeylElement::del_monomial(v)).expect("same variable count")
        })
        .collect()
}

/// The GKZ system `H_A(β)`: box operators from the toric ideal and the
/// shifted Euler operators `E_k - β_k`.
pub fn gkz_presentation(a: &IntMatrix, beta: &[Rational], order: TermOrder) -> Result<GkzPresentation> {
    if beta.len() != a.nrows() {
        return Err(GkzError::DimensionMismatch(format!("parameter has {} entries, matrix has {} rows", beta.len(), a.nrows())));
    }
    let n = a.ncols();
    let eulers = (0..a.nrows())
        .map(|k| euler_field(a, k, 0, n).sub(&WeylElement::constant(n, beta[k].clone())).expect("same variable count"))
        .collect();
    Ok(GkzPresentation { matrix: a.clone(), beta: beta.to_vec(), boxes: box_operators(a, order), eulers })
}

/// Generators of the system on `λ_0 = 1`: boxes and shifted Euler operators
/// of `A` on variables `1..n`, plus `∂_0 + Σ_{i ≥ 1} λ_i ∂_i`.
pub fn restrict_presentation(atilde: &IntMatrix, beta_tilde: &[Rational], order: TermOrder) -> Result<Vec<WeylOperator>> {
    if beta_tilde.len() != atilde.nrows() {
        return Err(GkzError::DimensionMismatch(format!(
            "parameter has {} entries, matrix has {} rows",
            beta_tilde.len(),
            atilde.nrows()
        )));
    }
    let a = atilde.dehomogenize().ok_or(GkzError::FirstRowNotOnes)?;
    if a.nrows() == 0 || (0..a.ncols()).any(|i| !a[(0, i)].is_one()) {
        return Err(GkzError::FirstRowNotOnes);
    }
    let n = a.ncols() + 1;
    let mut gens: Vec<WeylOperator> = box_operators(&a, order).iter().map(|b| b.shift_vars(1, n)).collect();
    for k in 0..a.nrows() {
        let e = euler_field(&a, k, 1, n).sub(&WeylElement::constant(n, beta_tilde[k + 1].clone()))?;
        gens.push(e);
    }
    let mut extra = WeylElement::del(n, 0);
    for i in 1..n {
        extra = extra.add(&WeylElement::lambda(n, i).mul(&WeylElement::del(n, i))?)?;
    }
    gens.push(extra);
    Ok(gens)
}

/// `target = Σ cofactor_g · g`, verified on construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipCertificate {
    pub cofactors: Vec<WeylOperator>,
    pub bound: u32,
}

impl MembershipCertificate {
    pub fn expand(&self, gens: &[WeylOperator]) -> Result<WeylOperator> {
        let n = gens.first().map_or(0, WeylElement::nvars);
        let mut acc = WeylElement::zero(n);
        for (c, g) in self.cofactors.iter().zip(gens) {
            acc = acc.add(&c.mul(g)?)?;
        }
        Ok(acc)
    }
}

fn degree(key: &WeylMonomial) -> Vec<i64> {
    key.0.iter().zip(&key.1).map(|(&u, &v)| v as i64 - u as i64).collect()
}

/// Projection of `Z^N` killing the degree differences inside each element,
/// so every element becomes homogeneous.
fn coarse_grading(nvars: usize, elems: &[&WeylOperator]) -> Vec<Vec<Rational>> {
    let mut diffs: Vec<Vec<Rational>> = Vec::new();
    for e in elems {
        let mut keys = e.terms().keys();
        let Some(first) = keys.next().map(degree) else { continue };
        for k in keys {
            let d = degree(k);
            if d != first {
                diffs.push(d.iter().zip(&first).map(|(x, y)| Rational::from_integer((x - y).into())).collect());
            }
        }
    }
    if diffs.is_empty() {
        return (0..nvars).map(|i| (0..nvars).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect()).collect();
    }
    nullspace(&Matrix::from_rows(diffs).expect("equal lengths"))
}

fn class_of(proj: &[Vec<Rational>], deg: &[i64]) -> Vec<Rational> {
    proj.iter().map(|p| p.iter().zip(deg).map(|(x, &y)| x * Rational::from_integer(y.into())).sum()).collect()
}

fn monomials_up_to(nvars: usize, bound: u32) -> Vec<WeylMonomial> {
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[k] = e;
            rec(k + 1, left - e, cur, out);
        }
        cur[k] = 0;
    }
    let mut flat = Vec::new();
    rec(0, bound, &mut vec![0; 2 * nvars], &mut flat);
    flat.into_iter().map(|m| (m[..nvars].to_vec(), m[nvars..].to_vec())).collect()
}

fn solve_at_degree(target: &WeylOperator, gens: &[WeylOperator], bound: u32) -> Result<Option<MembershipCertificate>> {
    let n = target.nvars();
    let mut elems: Vec<&WeylOperator> = gens.iter().collect();
    elems.push(target);
    let proj = coarse_grading(n, &elems);
    let target_class = target.terms().keys().next().map(|k| class_of(&proj, &degree(k)));
    let monos = monomials_up_to(n, bound);

    // unknown = (generator, cofactor monomial)
    let mut unknowns: Vec<(usize, WeylMonomial)> = Vec::new();
    let mut columns: Vec<WeylOperator> = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        let Some(gk) = g.terms().keys().next() else { continue };
        let gclass = class_of(&proj, &degree(gk));
        for m in &monos {
            let mclass = class_of(&proj, &degree(m));
            let sum: Vec<Rational> = mclass.iter().zip(&gclass).map(|(x, y)| x + y).collect();
            if target_class.as_ref().is_some_and(|t| *t != sum) {
                continue;
            }
            let mono = WeylElement::term(n, m.0.clone(), m.1.clone(), Rational::one());
            columns.push(mono.mul(g)?);
            unknowns.push((gi, m.clone()));
        }
    }
    let mut rows: BTreeSet<WeylMonomial> = target.terms().keys().cloned().collect();
    for c in &columns {
        rows.extend(c.terms().keys().cloned());
    }
    let row_index: HashMap<&WeylMonomial, usize> = rows.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut mat = Matrix::zeros(rows.len(), columns.len());
    for (j, c) in columns.iter().enumerate() {
        for (k, x) in c.terms() {
            mat[(row_index[k], j)] = x.clone();
        }
    }
    let mut rhs = vec![Rational::zero(); rows.len()];
    for (k, x) in target.terms() {
        rhs[row_index[k]] = x.clone();
    }
    if columns.is_empty() {
        return Ok(None);
    }
    let Some(sol) = solve_affine(&mat, &rhs) else { return Ok(None) };
    let mut cofactors = vec![WeylElement::zero(n); gens.len()];
    for ((gi, (u, v)), x) in unknowns.iter().zip(&sol.particular) {
        cofactors[*gi] = cofactors[*gi].add(&WeylElement::term(n, u.clone(), v.clone(), x.clone()))?;
    }
    let cert = MembershipCertificate { cofactors, bound };
    if cert.expand(gens)? != *target {
        return Ok(None);
    }
    Ok(Some(cert))
}

/// Searches for left cofactors of total degree at most `bound` with
/// `Σ c_g g = target`. `None` is not a proof of non-membership.
pub fn ideal_member_bounded(target: &WeylOperator, gens: &[WeylOperator], bound: u32) -> Result<Option<MembershipCertificate>> {
    for g in gens {
        target.check(g)?;
    }
    if target.is_zero() {
        let n = target.nvars();
        return Ok(Some(MembershipCertificate { cofactors: vec![WeylElement::zero(n); gens.len()], bound: 0 }));
    }
    for b in 0..=bound {
        if let Some(c) = solve_at_degree(target, gens, b)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// `h` with `Σ_k h_k E_k = Σ_i λ_i ∂_i`, verified in the Weyl algebra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerDecomposition {
    #[serde(serialize_with = "crate::serde_ints")]
    pub h: Vec<Int>,
}

impl EulerDecomposition {
    /// The scalar by which the total Euler field acts: `h · β`.
    pub fn b(&self, beta: &[Rational]) -> Rational {
        self.h.iter().zip(beta).map(|(h, b)| Rational::from_integer(h.clone()) * b).sum()
    }
}

pub fn euler_decomposition(a: &IntMatrix) -> Option<EulerDecomposition> {
    let h = homogeneity_vector(a)?;
    let n = a.ncols();
    let mut lhs = WeylElement::zero(n);
    for (k, hk) in h.iter().enumerate() {
        lhs = lhs.add(&euler_field(a, k, 0, n).scale(&Rational::from_integer(hk.clone()))).ok()?;
    }
    let mut total = WeylElement::zero(n);
    for i in 0..n {
        total = total.add(&WeylElement::lambda(n, i).mul(&WeylElement::del(n, i)).ok()?).ok()?;
    }
    assert_eq!(lhs, total, "homogeneity vector failed symbolic verification");
    Some(EulerDecomposition { h })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(s: &str, n: usize) -> WeylOperator {
        WeylOperator::parse(s, Some(n)).unwrap()
    }

    fn m(s: &str) -> IntMatrix {
        IntMatrix::parse(s).unwrap()
    }

    fn zeros(d: usize) -> Vec<Rational> {
        vec![Rational::zero(); d]
    }

    #[test]
    fn commutation() {
        assert_eq!(op("d0*l0", 1), op("l0*d0 + 1", 1));
        assert_eq!(op("d0", 1).mul(&op("l0^2", 1)).unwrap().to_string(), "l0^2*d0 + 2*l0");
        assert_eq!(op("(l0*d0)^2", 1), op("l0^2*d0^2 + l0*d0", 1));
        assert_eq!(op("d1*l0", 2).to_string(), "l0*d1");
        assert!(op("l0", 1).mul(&op("l0", 2)).is_err());
    }

    #[test]
    fn parse_and_print() {
        let e = op("3*l0^2*d0 - 4*l1*l2*d0^2 + l0", 3);
        assert_eq!(WeylOperator::parse(&e.to_string(), Some(3)).unwrap(), e);
        assert_eq!(op("1/2*l0 - 1/2*l0", 1), WeylElement::zero(1));
        assert_eq!(WeylOperator::parse("l2", None).unwrap().nvars(), 3);
        assert!(WeylOperator::parse("l0 +", Some(1)).is_err());
        assert!(WeylOperator::parse("x0", Some(1)).is_err());
        assert!(WeylOperator::parse("l3", Some(2)).is_err());
    }

    #[test]
    fn presentations() {
        let p = gkz_presentation(&m("1"), &[Rational::new(1.into(), 3.into())], TermOrder::default()).unwrap();
        assert!(p.boxes.is_empty());
        assert_eq!(p.eulers[0].to_string(), "l0*d0 - 1/3");
        let p = gkz_presentation(&m("1 1 1; 0 1 -1"), &zeros(2), TermOrder::default()).unwrap();
        assert_eq!(p.boxes, vec![op("d0^2 - d1*d2", 3)]);
        assert_eq!(p.eulers, vec![op("l0*d0 + l1*d1 + l2*d2", 3), op("l1*d1 - l2*d2", 3)]);
        let ah = m("3 2 0; 1 1 1").homogenize();
        let p = gkz_presentation(&ah, &zeros(3), TermOrder::default()).unwrap();
        assert_eq!(p.boxes, vec![op("d2^3 - d1^2*d3", 4)]);
        assert_eq!(p.eulers[1], op("3*l1*d1 + 2*l2*d2", 4));
        for b in &p.boxes {
            assert!(b.a_degree(&ah).is_some());
        }
    }

    #[test]
    fn restriction() {
        let b = vec![Rational::from_integer(5.into()), Rational::from_integer(7.into())];
        let gens = restrict_presentation(&m("1 1; 0 1"), &b, TermOrder::default()).unwrap();
        assert_eq!(gens, vec![op("l1*d1 - 7", 2), op("d0 + l1*d1", 2)]);
        let gens = restrict_presentation(&m("1 1; 1 1").homogenize(), &zeros(3), TermOrder::default()).unwrap();
        assert_eq!(gens.len(), 4);
        assert_eq!(gens.last().unwrap(), &op("d0 + l1*d1 + l2*d2", 3));
        assert_eq!(
            restrict_presentation(&m("3 2 0; 1 1 1").homogenize(), &zeros(3), TermOrder::default()),
            Err(GkzError::FirstRowNotOnes)
        );
    }

    #[test]
    fn membership() {
        let gens = vec![op("l0*d0 - 1", 1), op("d0^2", 1)];
        let c = ideal_member_bounded(&gens[0], &gens, 2).unwrap().unwrap();
        assert_eq!(c.cofactors, vec![WeylElement::one(1), WeylElement::zero(1)]);

        let p = gkz_presentation(&m("1 1 1; 0 1 -1"), &zeros(2), TermOrder::default()).unwrap();
        let gens = p.generators();
        let target = op("d0*((4*l1*l2 - l0^2)*d0 + l0) - 1", 3);
        let c = ideal_member_bounded(&target, &gens, 4).unwrap().expect("certificate");
        assert_eq!(c.expand(&gens).unwrap(), target);
        // with the opposite sign the residual is 2 l0 d0, not zero
        let printed = op("d0*((l0^2 - 4*l1*l2)*d0 + l0) - 1", 3);
        assert!(ideal_member_bounded(&printed, &gens, 4).unwrap().is_none());
        let shifted = printed.sub(&op("2*l0*d0", 3)).unwrap();
        assert!(ideal_member_bounded(&shifted, &gens, 4).unwrap().is_some());
        assert!(ideal_member_bounded(&WeylElement::one(3), &gens, 2).unwrap().is_none());
    }

    #[test]
    fn euler_decompositions() {
        assert_eq!(euler_decomposition(&m("3 2 0; 1 1 1")).unwrap().h, vec![Int::zero(), Int::one()]);
        assert_eq!(euler_decomposition(&m("2 5 1; 0 1 1").homogenize()).unwrap().h, vec![Int::one(), Int::zero(), Int::zero()]);
        assert!(euler_decomposition(&m("2 5")).is_none());
    }
}
