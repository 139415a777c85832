//! Exact computations for GKZ hypergeometric systems: lattices, cones and
//! semigroups, toric ideals, resonance of parameters, Weyl algebra
//! presentations and the family morphism between them.

pub mod error;
pub mod family;
pub mod groebner;
pub mod linalg;
pub mod lp;
pub mod matrix;
pub mod poly;
pub mod report;
pub mod diagram;
pub mod polyhedral;
pub mod resonance;
pub mod scalar;
pub mod smith;
pub mod toric;
pub mod weyl;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use error::{GkzError, Result};
pub use matrix::IntMatrix;

/// Arbitrary-precision integer used for matrices and lattice points.
pub type Int = BigInt;
/// Arbitrary-precision rational used for parameters and coefficients.
pub type Rational = BigRational;

fn int_value(x: &Int) -> serde_json::Value {
    match num_traits::ToPrimitive::to_i64(x) {
        Some(i) => i.into(),
        None => x.to_string().into(),
    }
}

pub(crate) fn serde_int<S: serde::Serializer>(x: &Int, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&int_value(x), s)
}

pub(crate) fn serde_ints<S: serde::Serializer>(v: &[Int], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(int_value))
}

pub(crate) fn serde_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(scalar::fmt_rational))
}
