//! The two quadratic families whose composita carry infinitely many square
//! classes of totally positive units.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::{is_square_in, MultiquadDescriptor};
use crate::arith::{is_perfect_square, is_prime, squarefree_part};
use crate::field::FieldElement;
use crate::quad::{delta, lemma51_witness, quad_sqrt, QuadElem, QuadField};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Example53Member {
    pub k: usize,
    #[serde(serialize_with = "crate::arith::ser_display")]
    pub n: BigInt,
    /// `4 n^2 - 1`.
    #[serde(serialize_with = "crate::arith::ser_display")]
    pub radicand: BigInt,
    pub field: QuadField,
    /// `2n + sqrt(4n^2 - 1)`.
    pub eps: QuadElem,
    /// `2(2n + 1)`, the rational square class of `eps` in its field.
    #[serde(serialize_with = "crate::arith::ser_display")]
    pub class: BigInt,
    pub tp_unit: bool,
    pub class_matches: bool,
    pub coprime_to_previous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Example53Family {
    pub members: Vec<Example53Member>,
    /// Every `2(2n_k+1)` is a non-square in the compositum.
    pub classes_nonsquare: bool,
    /// Every `(2n_k+1)(2n_l+1)`, `k < l`, is a non-square in the compositum.
    pub products_nonsquare: bool,
}

impl Example53Family {
    pub fn all_checks(&self) -> bool {
        self.classes_nonsquare
            && self.products_nonsquare
            && self
                .members
                .iter()
                .all(|m| m.tp_unit && m.class_matches && m.coprime_to_previous)
    }

    pub fn generators(&self) -> Vec<i128> {
        self.members.iter().map(|m| m.field.d()).collect()
    }
}

/// `n_0 = 1` and `n_k` the smallest multiple of `prod_{l<k} (4 n_l^2 - 1)`
/// with `2 n_k + 1` not a square.
pub fn example53_family(m: usize) -> Result<Example53Family> {
    let mut members: Vec<Example53Member> = Vec::with_capacity(m);
    let mut modulus = BigInt::one();
    for k in 0..m {
        let n = if k == 0 {
            BigInt::one()
        } else {
            let mut t = BigInt::one();
            loop {
                let n = &modulus * &t;
                if !is_perfect_square(&(2 * &n + 1)) {
                    break n;
                }
                t += 1;
            }
        };
        let radicand = 4 * &n * &n - 1;
        let sf = squarefree_part(&radicand)?;
        let d = sf
            .s
            .to_i128()
            .ok_or_else(|| Error::Overflow(format!("radicand 4n^2-1 for n = {n}")))?;
        let field = QuadField::new(d)?;
        let eps = field.elem(
            BigRational::from_integer(2 * &n),
            BigRational::from_integer(sf.r.clone()),
        );
        let class: BigInt = 2 * (2 * &n + 1);
        let tp_unit = eps.is_unit() && eps.is_totally_positive();
        let class_matches = lemma51_witness(&eps)
            .map(|(_, t)| t == BigRational::from_integer(class.clone()))
            .unwrap_or(false)
            && quad_sqrt(&eps.scale(&BigRational::from_integer(class.clone()))).is_some();
        let coprime_to_previous = members.iter().all(|p| p.radicand.gcd(&radicand).is_one());
        modulus *= &radicand;
        members.push(Example53Member {
            k,
            n,
            radicand,
            field,
            eps,
            class,
            tp_unit,
            class_matches,
            coprime_to_previous,
        });
    }
    let ambient = MultiquadDescriptor::Explicit(members.iter().map(|m| m.field.d()).collect());
    let odd = |m: &Example53Member| BigRational::from_integer(2 * &m.n + 1);
    let mut classes_nonsquare = true;
    let mut products_nonsquare = true;
    for (i, a) in members.iter().enumerate() {
        classes_nonsquare &= !is_square_in(&BigRational::from_integer(a.class.clone()), &ambient)?;
        for b in &members[i + 1..] {
            products_nonsquare &= !is_square_in(&(odd(a) * odd(b)), &ambient)?;
        }
    }
    Ok(Example53Family {
        members,
        classes_nonsquare,
        products_nonsquare,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Example54Member {
    pub index: usize,
    pub primes: (i128, i128),
    pub field: QuadField,
    #[serde(serialize_with = "crate::arith::ser_display")]
    pub delta: BigInt,
    pub delta_is_prime_factor: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Example54Family {
    pub members: Vec<Example54Member>,
    /// Every `delta_i` is a non-square in the compositum.
    pub deltas_nonsquare: bool,
    /// Every `delta_i delta_j`, `i < j`, is a non-square in the compositum.
    pub products_nonsquare: bool,
}

impl Example54Family {
    pub fn all_checks(&self) -> bool {
        self.deltas_nonsquare
            && self.products_nonsquare
            && self.members.iter().all(|m| m.delta_is_prime_factor)
    }
}

/// The first `count` primes congruent to 3 mod 4.
pub fn primes_3_mod_4(count: usize) -> Vec<i128> {
    (3i128..)
        .step_by(4)
        .filter(|&p| is_prime(&BigInt::from(p)) == Some(true))
        .take(count)
        .collect()
}

/// Pairs the primes as `Q(sqrt(q_{2i} q_{2i+1}))` and computes each `delta`.
pub fn example54_family(primes: &[i128]) -> Result<Example54Family> {
    for (i, &p) in primes.iter().enumerate() {
        let bad = p.rem_euclid(4) != 3
            || is_prime(&BigInt::from(p)) != Some(true)
            || primes[..i].contains(&p);
        if bad {
            return Err(Error::BadPrime(BigInt::from(p)));
        }
    }
    if primes.len() % 2 == 1 {
        return Err(Error::BadPrime(BigInt::from(primes[primes.len() - 1])));
    }
    let mut members = Vec::with_capacity(primes.len() / 2);
    for (index, pair) in primes.chunks(2).enumerate() {
        let (q, r) = (pair[0], pair[1]);
        let prod = q
            .checked_mul(r)
            .ok_or_else(|| Error::Overflow(format!("{q}*{r}")))?;
        let field = QuadField::new(prod)?;
        let delta = delta(field)?;
        let delta_is_prime_factor = delta == BigInt::from(q) || delta == BigInt::from(r);
        members.push(Example54Member {
            index,
            primes: (q, r),
            field,
            delta,
            delta_is_prime_factor,
        });
    }
    let ambient = MultiquadDescriptor::Explicit(members.iter().map(|m| m.field.d()).collect());
    let mut deltas_nonsquare = true;
    let mut products_nonsquare = true;
    for (i, a) in members.iter().enumerate() {
        let da = BigRational::from_integer(a.delta.clone());
        deltas_nonsquare &= !is_square_in(&da, &ambient)?;
        for b in &members[i + 1..] {
            let db = BigRational::from_integer(b.delta.clone());
            products_nonsquare &= !is_square_in(&(&da * db), &ambient)?;
        }
    }
    Ok(Example54Family {
        members,
        deltas_nonsquare,
        products_nonsquare,
    })
}

/// Square roots of `eps * class` witness that `eps` and `class` share a
/// square class in the field of `eps`.
pub(crate) fn same_class(eps: &QuadElem, class: &BigRational) -> bool {
    quad_sqrt(&eps.scale(class)).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms() {
        let fam = example53_family(3).unwrap();
        let ns: Vec<BigInt> = fam.members.iter().map(|m| m.n.clone()).collect();
        assert_eq!(ns, vec![1.into(), 3.into(), 105.into()]);
        assert_eq!(fam.members[1].class, BigInt::from(14));
        assert!(fam.all_checks());
    }

    #[test]
    fn primes_list() {
        assert_eq!(primes_3_mod_4(5), vec![3, 7, 11, 19, 23]);
    }
}
