//! Integer and rational utilities shared by every other module: squarefree
//! decomposition, perfect squares, continued fractions of quadratic
//! irrationals, GF(2) square-class algebra and dyadic radical enclosures.

pub mod cf;
pub mod factor;
pub mod gf2;
pub mod interval;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use cf::{cf_sqrt, CfExpansion, Convergents, QuadraticCf};
pub use factor::{
    is_perfect_square, is_prime, squarefree_part, squarefree_part_with_bound, SquareFreeDecomp,
    DEFAULT_TRIAL_BOUND,
};
pub use gf2::{gf2_express, gf2_rank, SquareClassVector};
pub use interval::{radical_enclosure, Interval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("cannot factor {value}: cofactor {cofactor} exceeds trial bound {bound} and is not proven prime")]
    FactorizationIncomplete {
        value: BigInt,
        cofactor: BigInt,
        bound: u64,
    },
    #[error("zero has no squarefree decomposition")]
    Zero,
    #[error("{0} is not a valid radicand (need a non-square integer >= 2)")]
    InvalidRadicand(BigInt),
}

/// Serializes through `Display`, e.g. big integers as decimal strings.
pub(crate) fn ser_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Shorthand for building a rational from integer numerator and denominator.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative integer");
    n.sqrt()
}

/// Exact square root of a rational, if it is the square of a rational.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    let n = q.numer();
    let d = q.denom();
    let rn = isqrt(n);
    let rd = isqrt(d);
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

/// Floor of a rational as an integer.
pub fn rational_floor(q: &BigRational) -> BigInt {
    q.floor().to_integer()
}

pub fn is_integer(q: &BigRational) -> bool {
    q.denom().is_one()
}
