use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ArithError;

/// Simple continued fraction `sqrt(D) = [a0; period...]` with minimal period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfExpansion {
    pub a0: i128,
    pub period: Vec<i128>,
}

impl CfExpansion {
    /// Convergent `p/q` obtained from `a0` and one full period. Its norm
    /// `p^2 - D q^2` is `(-1)^len(period)`.
    pub fn period_convergent(&self) -> (BigInt, BigInt) {
        let terms = std::iter::once(self.a0).chain(self.period.iter().copied());
        let mut conv = Convergents::new(terms);
        let mut last = (BigInt::zero(), BigInt::zero());
        // the convergent just before the closing 2*a0 term
        for _ in 0..self.period.len() {
            last = conv.next().expect("finite prefix");
        }
        last
    }
}

/// Expansion of `sqrt(D)` for a non-square `D >= 2`, stopping at the first
/// return of the recurrence to `Q = 1`.
pub fn cf_sqrt(d: i128) -> Result<CfExpansion, ArithError> {
    if d < 2 || d.sqrt() * d.sqrt() == d {
        return Err(ArithError::InvalidRadicand(BigInt::from(d)));
    }
    let mut cf = QuadraticCf::new(0, 1, d)?;
    let a0 = cf.next().expect("infinite expansion");
    let mut period = Vec::new();
    loop {
        let a = cf.next().expect("infinite expansion");
        period.push(a);
        if cf.last_q() == 1 {
            break;
        }
    }
    Ok(CfExpansion { a0, period })
}

/// Partial quotients of the quadratic irrational `(P + sqrt(D)) / Q`,
/// produced by the standard `(P, Q)` recurrence.
#[derive(Debug, Clone)]
pub struct QuadraticCf {
    p: i128,
    q: i128,
    d: i128,
    root: i128,
    last_q: i128,
}

impl QuadraticCf {
    pub fn new(p: i128, q: i128, d: i128) -> Result<Self, ArithError> {
        if d < 2 || q == 0 {
            return Err(ArithError::InvalidRadicand(BigInt::from(d)));
        }
        let root = d.sqrt();
        if root * root == d {
            return Err(ArithError::InvalidRadicand(BigInt::from(d)));
        }
        let (p, q, d) = if (d - p * p) % q == 0 {
            (p, q, d)
        } else {
            // rescale so that Q divides D - P^2
            let qa = q.abs();
            (p * qa, q * qa, d * q * q)
        };
        Ok(Self {
            p,
            q,
            d,
            root: d.sqrt(),
            last_q: q,
        })
    }

    /// The `Q` value of the complete quotient that produced the last term.
    pub fn last_q(&self) -> i128 {
        self.last_q
    }
}

impl Iterator for QuadraticCf {
    type Item = i128;

    fn next(&mut self) -> Option<i128> {
        let a = if self.q > 0 {
            Integer::div_floor(&(self.p + self.root), &self.q)
        } else {
            -Integer::div_floor(&(self.p + self.root), &-self.q) - 1
        };
        self.last_q = self.q;
        let p_next = a * self.q - self.p;
        let q_next = (self.d - p_next * p_next) / self.q;
        self.p = p_next;
        self.q = q_next;
        Some(a)
    }
}

/// Convergents `p_n / q_n` of a sequence of partial quotients.
pub struct Convergents<I> {
    terms: I,
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
}

impl<I: Iterator<Item = i128>> Convergents<I> {
    pub fn new(terms: I) -> Self {
        Self {
            terms,
            p: (BigInt::zero(), BigInt::one()),
            q: (BigInt::one(), BigInt::zero()),
        }
    }
}

impl<I: Iterator<Item = i128>> Iterator for Convergents<I> {
    type Item = (BigInt, BigInt);

    fn next(&mut self) -> Option<(BigInt, BigInt)> {
        let a = BigInt::from(self.terms.next()?);
        let p = &a * &self.p.1 + &self.p.0;
        let q = &a * &self.q.1 + &self.q.0;
        self.p = (std::mem::take(&mut self.p.1), p.clone());
        self.q = (std::mem::take(&mut self.q.1), q.clone());
        Some((p, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_expansions() {
        assert_eq!(cf_sqrt(2).unwrap(), CfExpansion { a0: 1, period: vec![2] });
        assert_eq!(cf_sqrt(3).unwrap(), CfExpansion { a0: 1, period: vec![1, 2] });
        assert_eq!(
            cf_sqrt(21).unwrap(),
            CfExpansion { a0: 4, period: vec![1, 1, 2, 1, 1, 8] }
        );
        assert_eq!(cf_sqrt(7).unwrap().period, vec![1, 1, 1, 4]);
    }

    #[test]
    fn rejects_squares() {
        assert!(cf_sqrt(49).is_err());
        assert!(cf_sqrt(1).is_err());
    }

    #[test]
    fn golden_ratio_conjugate() {
        // (sqrt(5) - 1) / 2 = [0; 1, 1, 1, ...]
        let terms: Vec<i128> = QuadraticCf::new(-1, 2, 5).unwrap().take(6).collect();
        assert_eq!(terms, vec![0, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn period_convergent_solves_pell() {
        // oracle: p^2 - D q^2 = +-1 for every non-square D <= 500
        for d in 2i128..=500 {
            if d.sqrt() * d.sqrt() == d {
                continue;
            }
            let cf = cf_sqrt(d).unwrap();
            assert_eq!(*cf.period.last().unwrap(), 2 * cf.a0, "D={d}");
            let (p, q) = cf.period_convergent();
            let n = &p * &p - BigInt::from(d) * &q * &q;
            let expected = if cf.period.len().is_multiple_of(2) { 1 } else { -1 };
            assert_eq!(n, BigInt::from(expected), "D={d}");
        }
    }
}
