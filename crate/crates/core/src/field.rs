//! Common interface for the totally real fields supported here: the
//! rationals, real quadratic fields and real biquadratic fields.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, Interval};

/// A totally real number field with a fixed embedding into the reals.
pub trait NumberField: Clone + Debug + PartialEq + Eq + Hash + Send + Sync + Display {
    type Elem: FieldElement<Field = Self>;

    fn degree(&self) -> usize;

    fn from_rational(&self, q: BigRational) -> Self::Elem;

    fn zero(&self) -> Self::Elem {
        self.from_rational(BigRational::zero())
    }

    fn one(&self) -> Self::Elem {
        self.from_rational(BigRational::one())
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_rational(arith::int(n))
    }

    /// The positive square root of the integer `k`, when it lies in the field.
    fn radical(&self, k: &BigInt) -> Option<Self::Elem>;

    /// Every algebraic integer whose `j`-th embedding lies in `bounds[j]`
    /// (closed intervals, embeddings ordered as in
    /// [`FieldElement::conjugates`]).
    fn integers_in_box(&self, bounds: &[(BigRational, BigRational)]) -> Vec<Self::Elem>;
}

/// Elements of a [`NumberField`]. Values refer to the fixed real embedding;
/// `conjugates()[j]` evaluated there gives the `j`-th real embedding.
pub trait FieldElement:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Field: NumberField<Elem = Self>;

    fn field(&self) -> Self::Field;

    fn is_zero(&self) -> bool;

    fn inverse(&self) -> Option<Self>;

    /// All Galois conjugates, the element itself first.
    fn conjugates(&self) -> Vec<Self>;

    /// Sign of the value under the fixed embedding, decided exactly.
    fn signum(&self) -> Ordering;

    /// Enclosure of the value with radicals approximated to `bits` bits.
    fn enclosure(&self, bits: u32) -> Interval;

    fn is_integral(&self) -> bool;

    /// Absolute norm to the rationals.
    fn norm(&self) -> BigRational;

    /// A square root inside the field, if one exists.
    fn sqrt(&self) -> Option<Self>;

    fn scale(&self, q: &BigRational) -> Self;

    /// The element as a rational number, if it is one.
    fn to_rational(&self) -> Option<BigRational>;

    fn embedding_signs(&self) -> Vec<Ordering> {
        self.conjugates().iter().map(|c| c.signum()).collect()
    }

    fn is_totally_positive(&self) -> bool {
        self.conjugates()
            .iter()
            .all(|c| c.signum() == Ordering::Greater)
    }

    fn is_totally_nonnegative(&self) -> bool {
        self.conjugates()
            .iter()
            .all(|c| c.signum() != Ordering::Less)
    }

    fn is_unit(&self) -> bool {
        self.is_integral() && self.norm().abs().is_one()
    }

    fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Exact comparison of values under the fixed embedding.
    fn cmp_value(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }

    fn approx(&self) -> f64 {
        self.enclosure(64).midpoint_f64()
    }

    /// The house: the largest absolute value of a conjugate.
    fn house(&self) -> ExactReal<Self> {
        let mut best = self.abs();
        for c in self.conjugates().into_iter().skip(1) {
            let a = c.abs();
            if a.cmp_value(&best) == Ordering::Greater {
                best = a;
            }
        }
        ExactReal::new(best)
    }
}

/// An exactly known real number, stored as a field element under the fixed
/// embedding, together with a certified floating-point enclosure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactReal<E> {
    elem: E,
}

impl<E: FieldElement> ExactReal<E> {
    pub fn new(elem: E) -> Self {
        Self { elem }
    }

    pub fn elem(&self) -> &E {
        &self.elem
    }

    pub fn into_elem(self) -> E {
        self.elem
    }

    /// Midpoint and radius of a certified enclosure.
    pub fn float_approx(&self) -> (f64, f64) {
        let iv = self.elem.enclosure(64);
        (iv.midpoint_f64(), iv.radius_f64() + f64::EPSILON * iv.midpoint_f64().abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.float_approx().0
    }

    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        let f = self.elem.field();
        (self.elem.clone() - f.from_rational(q.clone())).signum()
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        self.elem.cmp_value(&other.elem)
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        let mut bits = 32;
        loop {
            let iv = self.elem.enclosure(bits);
            let lo = arith::rational_floor(&iv.lo);
            let hi = arith::rational_floor(&iv.hi);
            if lo == hi {
                return lo;
            }
            // the value may sit exactly on the integer `hi`
            if self.cmp_rational(&BigRational::from_integer(hi.clone())) != Ordering::Less {
                return hi;
            }
            if hi - &lo == BigInt::one() {
                return lo;
            }
            bits *= 2;
        }
    }
}

impl<E: FieldElement> Display for ExactReal<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (~{:.6})", self.elem, self.to_f64())
    }
}

/// The rational numbers as a degree-one field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalField;

impl Display for RationalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q")
    }
}

/// A rational number viewed as an element of [`RationalField`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn int(n: i64) -> Self {
        Rational(arith::int(n))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(q: BigRational) -> Self {
        Rational(q)
    }
}

impl Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl NumberField for RationalField {
    type Elem = Rational;

    fn degree(&self) -> usize {
        1
    }

    fn from_rational(&self, q: BigRational) -> Rational {
        Rational(q)
    }

    fn radical(&self, k: &BigInt) -> Option<Rational> {
        arith::rational_sqrt(&BigRational::from_integer(k.clone())).map(Rational)
    }

    fn integers_in_box(&self, bounds: &[(BigRational, BigRational)]) -> Vec<Rational> {
        let (lo, hi) = &bounds[0];
        let lo = lo.ceil().to_integer();
        let hi = hi.floor().to_integer();
        let mut out = Vec::new();
        let mut n = lo;
        while n <= hi {
            out.push(Rational(BigRational::from_integer(n.clone())));
            n += 1;
        }
        out
    }
}

impl FieldElement for Rational {
    type Field = RationalField;

    fn field(&self) -> RationalField {
        RationalField
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn inverse(&self) -> Option<Self> {
        (!self.0.is_zero()).then(|| Rational(self.0.recip()))
    }

    fn conjugates(&self) -> Vec<Self> {
        vec![self.clone()]
    }

    fn signum(&self) -> Ordering {
        self.0.cmp(&BigRational::zero())
    }

    fn enclosure(&self, _bits: u32) -> Interval {
        Interval::point(self.0.clone())
    }

    fn is_integral(&self) -> bool {
        self.0.denom().is_one()
    }

    fn norm(&self) -> BigRational {
        self.0.clone()
    }

    fn sqrt(&self) -> Option<Self> {
        arith::rational_sqrt(&self.0).map(Rational)
    }

    fn scale(&self, q: &BigRational) -> Self {
        Rational(&self.0 * q)
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.0.clone())
    }

    fn approx(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// Upper bound (as a rational slightly above the true value) for the square
/// root of a non-negative rational.
pub fn sqrt_upper(q: &BigRational) -> BigRational {
    if !q.is_positive() {
        return BigRational::zero();
    }
    // sqrt(n/d) <= (isqrt(n*d*4^k) + 1) / (d*2^k)
    let k = 16usize;
    let n = q.numer() * q.denom() * (BigInt::one() << (2 * k));
    let r = arith::isqrt(&n) + 1;
    BigRational::new(r, q.denom() * (BigInt::one() << k))
}

/// Interval bounds for every embedding of `e`, in conjugate order.
pub fn embedding_enclosures<E: FieldElement>(e: &E, bits: u32) -> Vec<Interval> {
    e.conjugates().iter().map(|c| c.enclosure(bits)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn rational_field_basics() {
        let q = Rational(rat(9, 4));
        assert_eq!(q.sqrt(), Some(Rational(rat(3, 2))));
        assert!(!q.is_integral());
        assert!(q.is_totally_positive());
        assert!(Rational::int(-1).is_unit());
        assert_eq!(ExactReal::new(Rational(rat(7, 2))).floor(), BigInt::from(3));
        assert_eq!(ExactReal::new(Rational::int(-3)).floor(), BigInt::from(-3));
        let pts = RationalField.integers_in_box(&[(rat(-3, 2), int(2))]);
        let want: Vec<Rational> = (-1..=2).map(Rational::int).collect();
        assert_eq!(pts, want);
    }

    #[test]
    fn sqrt_upper_is_an_upper_bound() {
        for (n, d) in [(2, 1), (1, 3), (100, 7), (49, 1)] {
            let q = rat(n, d);
            let u = sqrt_upper(&q);
            assert!(&u * &u >= q);
            assert!(u.to_f64().unwrap() - (n as f64 / d as f64).sqrt() < 1e-3);
        }
    }
}
