//! Sparse multivariate polynomials with a declared monomial order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::GkzError;
use crate::scalar::Field;

/// Exponent vector.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
#[derive(Default)]
pub enum TermOrder {
    /// Graded reverse lexicographic, `x_0 > x_1 > ...`.
    #[default]
    DegRevLex,
    /// Graded lexicographic.
    DegLex,
    /// Pure lexicographic.
    Lex,
    /// Block order eliminating the first `block` variables: compares the
    /// total degree in the block first, then breaks ties by degrevlex on
    /// the whole exponent.
    Elimination { block: usize },
}


impl FromStr for TermOrder {
    type Err = GkzError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "degrevlex" | "grevlex" | "drl" => Ok(TermOrder::DegRevLex),
            "deglex" | "grlex" => Ok(TermOrder::DegLex),
            "lex" | "plex" => Ok(TermOrder::Lex),
            other => Err(GkzError::Parse(format!("unknown term order `{other}`"))),
        }
    }
}

impl fmt::Display for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermOrder::DegRevLex => write!(f, "degrevlex"),
            TermOrder::DegLex => write!(f, "deglex"),
            TermOrder::Lex => write!(f, "lex"),
            TermOrder::Elimination { block } => write!(f, "elim({block})"),
        }
    }
}

fn degree(m: &[u32]) -> u64 {
    m.iter().map(|&e| e as u64).sum()
}

fn revlex(a: &[u32], b: &[u32]) -> Ordering {
    // larger when the last differing exponent is smaller
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

impl TermOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            TermOrder::Lex => a.cmp(b),
            TermOrder::DegLex => degree(a).cmp(&degree(b)).then_with(|| a.cmp(b)),
            TermOrder::DegRevLex => degree(a).cmp(&degree(b)).then_with(|| revlex(a, b)),
            TermOrder::Elimination { block } => degree(&a[..*block])
                .cmp(&degree(&b[..*block]))
                .then_with(|| TermOrder::DegRevLex.cmp(a, b)),
        }
    }
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// `b / a`, assuming `a | b`.
pub fn quotient(b: &[u32], a: &[u32]) -> Monomial {
    b.iter().zip(a).map(|(x, y)| x - y).collect()
}

pub fn mul_monomial(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// A polynomial as a list of terms sorted strictly decreasing under its
/// order, with no zero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    pub(crate) nvars: usize,
    pub(crate) order: TermOrder,
    pub(crate) terms: Vec<(Monomial, T)>,
}

impl<T: Field> Polynomial<T> {
    pub fn zero(nvars: usize, order: TermOrder) -> Self {
        Polynomial { nvars, order, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, order: TermOrder, c: T) -> Self {
        Self::from_terms(nvars, order, vec![(vec![0; nvars], c)])
    }

    pub fn monomial(order: TermOrder, exps: Monomial) -> Self {
        let n = exps.len();
        Self::from_terms(n, order, vec![(exps, T::one())])
    }

    /// `x^u - x^v`
    pub fn binomial(order: TermOrder, u: Monomial, v: Monomial) -> Self {
        let n = u.len();
        Self::from_terms(n, order, vec![(u, T::one()), (v, -T::one())])
    }

    /// Collects like terms and drops zeros.
    pub fn from_terms(nvars: usize, order: TermOrder, mut raw: Vec<(Monomial, T)>) -> Self {
        assert!(raw.iter().all(|(m, _)| m.len() == nvars), "exponent length mismatch");
        raw.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut terms: Vec<(Monomial, T)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match terms.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.clone() + c,
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        Polynomial { nvars, order, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Monomial, T)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coefficient(&self) -> Option<&T> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn with_order(&self, order: TermOrder) -> Self {
        Self::from_terms(self.nvars, order, self.terms.clone())
    }

    /// Re-embeds into a ring with `extra` new variables placed first.
    pub fn prepend_vars(&self, extra: usize, order: TermOrder) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; extra];
                e.extend_from_slice(m);
                (e, c.clone())
            })
            .collect();
        Self::from_terms(self.nvars + extra, order, terms)
    }

    /// Drops the first `count` variables, which must not occur.
    pub fn drop_leading_vars(&self, count: usize, order: TermOrder) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert!(m[..count].iter().all(|&e| e == 0));
                (m[count..].to_vec(), c.clone())
            })
            .collect();
        Self::from_terms(self.nvars - count, order, terms)
    }

    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) => {
                let inv = T::one() / lc.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        Polynomial {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x.clone() * c.clone())).collect(),
        }
    }

    /// `c x^m self`
    pub fn mul_term(&self, m: &[u32], c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        Polynomial {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(e, x)| (mul_monomial(e, m), x.clone() * c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                raw.push((mul_monomial(a, b), x.clone() * y.clone()));
            }
        }
        Self::from_terms(self.nvars, self.order, raw)
    }

    /// `self - c x^m other`, merging sorted term lists.
    pub fn sub_scaled(&self, m: &[u32], c: &T, other: &Self) -> Self {
        let order = self.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut it = other.terms.iter().map(|(e, x)| (mul_monomial(e, m), x.clone() * c.clone())).peekable();
        while i < self.terms.len() || it.peek().is_some() {
            let take_self = match (self.terms.get(i), it.peek()) {
                (Some(a), Some(b)) => match order.cmp(&a.0, &b.0) {
                    Ordering::Greater => Some(true),
                    Ordering::Less => Some(false),
                    Ordering::Equal => None,
                },
                (Some(_), None) => Some(true),
                (None, _) => Some(false),
            };
            match take_self {
                Some(true) => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Some(false) => {
                    let (e, x) = it.next().unwrap();
                    out.push((e, -x));
                }
                None => {
                    let (e, x) = it.next().unwrap();
                    let v = self.terms[i].1.clone() - x;
                    if !v.is_zero() {
                        out.push((e, v));
                    }
                    i += 1;
                }
            }
        }
        Polynomial { nvars: self.nvars, order, terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.sub_scaled(&vec![0; self.nvars], &-T::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.sub_scaled(&vec![0; self.nvars], &T::one(), other)
    }

    /// Whether every monomial has the same image under `deg`.
    pub fn is_homogeneous_by<D: PartialEq>(&self, deg: impl Fn(&[u32]) -> D) -> bool {
        let mut it = self.terms.iter().map(|(m, _)| deg(m));
        match it.next() {
            None => true,
            Some(first) => it.all(|d| d == first),
        }
    }
}

impl<T: Field> fmt::Display for Polynomial<T> {
    /// Writes terms in the `d<i>` variable syntax used for operators.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("d{i}") } else { format!("d{i}^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}
