use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Closed interval with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(q: BigRational) -> Self {
        Self {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_negative() {
            Self::new(&self.hi * c, &self.lo * c)
        } else {
            Self::new(&self.lo * c, &self.hi * c)
        }
    }

    /// `Some(sign)` once the interval excludes zero (or is the point zero).
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn radius_f64(&self) -> f64 {
        (self.width() / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::INFINITY)
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self.clone()
        } else {
            let m = if -&self.lo > self.hi { -&self.lo } else { self.hi.clone() };
            Self::new(BigRational::zero(), m)
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::new(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::new(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let c = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }
}

/// Dyadic enclosure `[m/2^bits, (m+1)/2^bits]` of `sqrt(d)` for `d >= 0`.
pub fn radical_enclosure(d: &BigInt, bits: u32) -> Interval {
    assert!(!d.is_negative());
    let scale = BigInt::one() << (2 * bits as usize);
    let m = (d * scale).sqrt();
    let den = BigInt::one() << bits as usize;
    let lo = BigRational::new(m.clone(), den.clone());
    if &m * &m == d * (BigInt::one() << (2 * bits as usize)) {
        return Interval::point(lo);
    }
    Interval::new(lo, BigRational::new(m + 1, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_enclosure() {
        let i = radical_enclosure(&BigInt::from(2), 20);
        assert!(i.lo.to_f64().unwrap() <= std::f64::consts::SQRT_2);
        assert!(i.hi.to_f64().unwrap() >= std::f64::consts::SQRT_2);
        assert!(i.radius_f64() < 1e-6);
        let sq = i.clone() * i;
        assert!(sq.lo < BigRational::from_integer(2.into()));
        assert!(sq.hi > BigRational::from_integer(2.into()));
    }

    #[test]
    fn perfect_square_is_a_point() {
        let i = radical_enclosure(&BigInt::from(49), 8);
        assert_eq!(i, Interval::point(BigRational::from_integer(7.into())));
    }
}
