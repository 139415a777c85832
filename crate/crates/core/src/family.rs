//! The family of Laurent polynomials attached to `B = C · D1 · A`, the
//! parameter index sets of its Gauss-Manin decomposition, and the symbolic
//! morphism `ψ` onto the GKZ module of `Ã`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{GkzError, Result};
use crate::matrix::IntMatrix;
use crate::polyhedral::face_lattice;
use crate::resonance::{dsres_face, ResonanceSet};
use crate::smith::smith_decompose;
use crate::weyl::{WeylElement, WeylOperator};
use crate::{Int, Rational};

/// Largest `l∞` radius of integer shifts tried per congruence class.
pub const SECTION_SEARCH_RADIUS: i64 = 4;

fn serialize_matrix<S: Serializer>(m: &IntMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&m.to_string())
}

/// `B = C · D1 · A` with `A = D2 · M`; the family is
/// `F_B = -Σ_i λ_i y^{b_i}`, kept as the exponent matrix `B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyData {
    #[serde(serialize_with = "serialize_matrix")]
    pub b: IntMatrix,
    #[serde(serialize_with = "serialize_matrix")]
    pub c: IntMatrix,
    #[serde(serialize_with = "crate::serde_ints")]
    pub e: Vec<Int>,
    #[serde(serialize_with = "serialize_matrix")]
    pub a: IntMatrix,
}

impl FamilyData {
    pub fn d1(&self) -> IntMatrix {
        let d = self.e.len();
        IntMatrix::from_fn(d, d, |r, c| if r == c { self.e[r].clone() } else { Int::zero() })
    }

    pub fn product(&self) -> IntMatrix {
        self.c.mul(&self.d1()).mul(&self.a)
    }

    /// Number of congruence classes in `∏ (1/e_k) Z / Z`.
    pub fn class_count(&self) -> Int {
        self.e.iter().product()
    }
}

pub fn factor_b(b: &IntMatrix) -> Result<FamilyData> {
    let s = smith_decompose(b)?;
    let a = s.lattice_matrix();
    debug_assert!(a.spans_lattice());
    Ok(FamilyData { b: b.clone(), c: s.c, e: s.divisors, a })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IndexKind {
    /// Representatives outside `sRes(Ã)`.
    #[serde(rename = "I")]
    Resonance,
    /// Representatives outside `DsRes(Ã)`.
    #[serde(rename = "I'")]
    Dual,
}

impl std::str::FromStr for IndexKind {
    type Err = GkzError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" | "sres" => Ok(IndexKind::Resonance),
            "I'" | "i'" | "dual" | "dsres" => Ok(IndexKind::Dual),
            _ => Err(GkzError::Parse(format!("unknown index set kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexMember {
    /// `γ ∈ ∏ [0, e_k - 1] / e_k`.
    #[serde(serialize_with = "crate::serde_rationals")]
    pub class: Vec<Rational>,
    /// The chosen representative in `Q^{d+1}`, congruent to `(0, γ)`.
    #[serde(serialize_with = "crate::serde_rationals")]
    pub member: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexSet {
    pub kind: IndexKind,
    /// Base point the section search starts from.
    #[serde(serialize_with = "crate::serde_ints")]
    pub base: Vec<Int>,
    pub members: Vec<IndexMember>,
}

fn classes(e: &[Int]) -> Vec<Vec<Rational>> {
    let mut out = vec![Vec::new()];
    for ek in e {
        let mut next = Vec::new();
        for prefix in &out {
            let mut i = Int::zero();
            while &i < ek {
                let mut v = prefix.clone();
                v.push(Rational::new(i.clone(), ek.clone()));
                next.push(v);
                i += 1;
            }
        }
        out = next;
    }
    out
}

/// Integer vectors of `l∞` norm exactly `r`, ordered by `l1` norm then
/// lexicographically.
pub(crate) fn shell(d: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-r; d];
    loop {
        if r == 0 || cur.iter().any(|x| x.abs() == r) {
            out.push(cur.clone());
        }
        let Some(k) = (0..d).find(|&k| cur[k] < r) else { break };
        cur[k] += 1;
        for x in &mut cur[..k] {
            *x = -r;
        }
    }
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), v.clone()));
    out
}

/// One representative per class of `(Z × (1/e) Z^d) / Z^{d+1}` avoiding
/// `sRes(Ã)` (kind I) or `DsRes(Ã)` (kind I').
pub fn index_sets(b: &IntMatrix, kind: IndexKind) -> Result<IndexSet> {
    let fam = factor_b(b)?;
    let at = fam.a.homogenize();
    let dim = at.nrows();
    let base: Vec<Int> = match kind {
        IndexKind::Resonance => ResonanceSet::new(&at)?.delta()?,
        IndexKind::Dual => {
            let cols = at.columns();
            (0..dim).map(|r| -cols.iter().map(|c| &c[r]).sum::<Int>()).collect()
        }
    };
    let resonance = match kind {
        IndexKind::Resonance => Some(ResonanceSet::new(&at)?),
        IndexKind::Dual => None,
    };
    let lattice = face_lattice(&at)?;
    let accepts = |p: &[Rational]| match &resonance {
        Some(set) => !set.contains(p),
        None => dsres_face(&at, &lattice, p).is_none(),
    };
    let mut members = Vec::new();
    'class: for (idx, gamma) in classes(&fam.e).into_iter().enumerate() {
        let start: Vec<Rational> = (0..dim)
            .map(|r| Rational::from_integer(base[r].clone()) + if r == 0 { Rational::zero() } else { gamma[r - 1].clone() })
            .collect();
        for radius in 0..=SECTION_SEARCH_RADIUS {
            for z in shell(dim, radius) {
                let p: Vec<Rational> = start.iter().zip(&z).map(|(x, &k)| x + Rational::from_integer(k.into())).collect();
                if accepts(&p) {
                    members.push(IndexMember { class: gamma, member: p });
                    continue 'class;
                }
            }
        }
        return Err(GkzError::SectionSearchFailed(idx));
    }
    Ok(IndexSet { kind, base, members })
}

/// `ψ(y^{Σ m_i a_i} ω_0 ⊗ ∂_0^s) = ∂_0^{s - Σ m + 1} ∂_1^{m_1} ... ∂_n^{m_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiImage {
    #[serde(serialize_with = "crate::serde_int")]
    pub coefficient: Int,
    /// `∂`-exponents over `0..=n`; negative entries are formal.
    #[serde(serialize_with = "crate::serde_ints")]
    pub exponents: Vec<Int>,
}

pub fn psi_image(m: &[Int], s: &Int) -> PsiImage {
    let total: Int = m.iter().sum();
    let mut exponents = vec![s - total + 1];
    exponents.extend(m.iter().cloned());
    PsiImage { coefficient: Int::one(), exponents }
}

/// The sections `Σ_i a_{ki} λ_i ∂_i`, `k = 1..d`, over the variables
/// `λ_0..λ_n` of `Ã`; they span the kernel of `ψ`.
pub fn psi_kernel_sections(a: &IntMatrix) -> Vec<WeylOperator> {
    let n = a.ncols() + 1;
    (0..a.nrows())
        .map(|k| {
            let mut e = WeylElement::zero(n);
            for i in 0..a.ncols() {
                let x = WeylElement::lambda(n, i + 1).mul(&WeylElement::del(n, i + 1)).expect("same variable count");
                e = e.add(&x.scale(&Rational::from_integer(a[(k, i)].clone()))).expect("same variable count");
            }
            e
        })
        .collect()
}

/// `c λ^u y^{Σ m_i a_i} ω_0 ⊗ ∂_0^s` on the Gauss-Manin side, with
/// `λ` ranging over `λ_1..λ_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSection {
    pub coefficient: Int,
    pub lambda: Vec<u32>,
    pub m: Vec<Int>,
    pub s: Int,
}

/// Operators `λ^u ∂^w` with `w ∈ Z^{n+1}`, normally ordered.
pub type LaurentOperator = BTreeMap<(Vec<u32>, Vec<Int>), Int>;

fn add_into(acc: &mut LaurentOperator, key: (Vec<u32>, Vec<Int>), c: Int) {
    let entry = acc.entry(key.clone()).or_insert_with(Int::zero);
    *entry += c;
    if entry.is_zero() {
        acc.remove(&key);
    }
}

impl FormalSection {
    /// `∂_{λ_i}` applied via the Gauss-Manin action; `i = 0` shifts `s`,
    /// `i ≥ 1` differentiates `λ^u` and multiplies by `y^{a_i} ∂_0`.
    pub fn act_del(&self, i: usize) -> Vec<FormalSection> {
        if i == 0 {
            return vec![FormalSection { s: &self.s + 1, ..self.clone() }];
        }
        let k = i - 1;
        let mut out = Vec::new();
        if self.lambda[k] > 0 {
            let mut lambda = self.lambda.clone();
            lambda[k] -= 1;
            out.push(FormalSection { coefficient: &self.coefficient * self.lambda[k], lambda, ..self.clone() });
        }
        let mut m = self.m.clone();
        m[k] += 1;
        out.push(FormalSection { m, s: &self.s + 1, ..self.clone() });
        out
    }
}

/// `ψ` extended `O_V`-linearly to formal sections.
pub fn psi_formal(sections: &[FormalSection]) -> LaurentOperator {
    let mut acc = LaurentOperator::new();
    for x in sections {
        let img = psi_image(&x.m, &x.s);
        add_into(&mut acc, (x.lambda.clone(), img.exponents), &x.coefficient * img.coefficient);
    }
    acc
}

/// Left multiplication by `∂_i` on normally ordered Laurent operators.
pub fn laurent_del(op: &LaurentOperator, i: usize) -> LaurentOperator {
    let mut acc = LaurentOperator::new();
    for ((u, w), c) in op {
        let mut w2 = w.clone();
        w2[i] += 1;
        add_into(&mut acc, (u.clone(), w2), c.clone());
        if i > 0 && u[i - 1] > 0 {
            let mut u2 = u.clone();
            u2[i - 1] -= 1;
            add_into(&mut acc, (u2, w.clone()), c * u[i - 1]);
        }
    }
    acc
}

/// `ψ(∂_i · x) = ∂_i · ψ(x)`.
pub fn psi_equivariant(x: &FormalSection, i: usize) -> bool {
    psi_formal(&x.act_del(i)) == laurent_del(&psi_formal(std::slice::from_ref(x)), i)
}

/// Whether `p ∈ Z^{d+1}`-translates of `q`.
pub fn congruent(p: &[Rational], q: &[Rational]) -> bool {
    p.len() == q.len() && p.iter().zip(q).all(|(x, y)| (x - y).is_integer())
}
