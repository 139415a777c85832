//! Scalar traits the exact algorithms are generic over.
//!
//! Integer algorithms (normal forms, kernels, membership) run over any
//! [`Integral`] type; elimination, linear programming, polynomial and Weyl
//! algebra arithmetic run over any [`Field`]. The crate root fixes the
//! arbitrary-precision instantiations ([`crate::Int`], [`crate::Rational`]).
//!
//! Only exact scalars implement [`Field`]: every algorithm here branches on
//! `is_zero`, so floating point types are deliberately not admitted.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// A signed Euclidean ring of exact integers.
pub trait Integral:
    Clone + Debug + Display + Hash + Ord + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn to_bigint(&self) -> BigInt;
    fn from_bigint(v: &BigInt) -> Option<Self>;
}

impl Integral for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
}

impl Integral for i64 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
}

/// An exact ordered field.
pub trait Field:
    Clone + Debug + Display + PartialEq + PartialOrd + num_traits::Num + Signed + Send + Sync + 'static
{
    fn from_bigint(v: &BigInt) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_bigint(&BigInt::from(v))
    }

    /// Exact conversion to an arbitrary-precision rational.
    fn to_rational(&self) -> BigRational;
}

impl Field for BigRational {
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
}

impl Field for Ratio<i64> {
    fn from_bigint(v: &BigInt) -> Self {
        Ratio::from_integer(v.to_i64().expect("integer does not fit in i64"))
    }
    fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p` or `p/q` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if num_traits::Zero::is_zero(&q) {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(fmt_rational(&q), "-3/2");
        assert_eq!(fmt_rational(&parse_rational(" 7 ").unwrap()), "7");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn small_field_agrees_with_big() {
        let a = <Ratio<i64> as Field>::from_i64(3) / Ratio::new(4, 1);
        assert_eq!(a.to_rational(), BigRational::new(3.into(), 4.into()));
    }
}
