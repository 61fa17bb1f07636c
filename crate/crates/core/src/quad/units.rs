//! Units of real quadratic rings: the fundamental unit via continued
//! fractions, the rational square class of a totally positive unit, and the
//! sign map on units.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::{QuadElem, QuadField};
use crate::arith::{self, cf_sqrt, squarefree_part, Convergents, QuadraticCf};
use crate::field::{FieldElement, NumberField};
use crate::{Error, Result};

/// Smallest unit `> 1` of the ring of integers of `field`.
pub fn fundamental_unit(field: QuadField) -> QuadElem {
    let d = field.d();
    let db = field.d_big();

    // solutions of p^2 - D q^2 = +-1
    let cf = QuadraticCf::new(0, 1, d).expect("field radicand is a non-square");
    let integral = Convergents::new(cf)
        .find(|(p, q)| (p * p - &db * q * q).abs().is_one())
        .map(|(p, q)| field.elem(BigRational::from_integer(p), BigRational::from_integer(q)))
        .expect("Pell equation is solvable");

    if d.rem_euclid(4) != 1 {
        return integral;
    }

    // a + b*omega with a/b a convergent of (sqrt(D) - 1)/2
    let c = BigInt::from((d - 1) / 4);
    let cf = QuadraticCf::new(-1, 2, d).expect("field radicand is a non-square");
    let half = Convergents::new(cf)
        .filter(|(_, b)| b.is_positive())
        .find(|(a, b)| (a * a + a * b - &c * b * b).abs().is_one())
        .map(|(a, b)| {
            let two = BigInt::from(2);
            field.elem(
                BigRational::new(&a * &two + &b, two.clone()),
                BigRational::new(b, two),
            )
        })
        .expect("unit equation is solvable");

    if half.cmp_value(&integral) == Ordering::Less {
        half
    } else {
        integral
    }
}

/// Squarefree `delta` with `delta * eps` a square, for `eps` the fundamental
/// unit of norm `1`.
pub fn delta(field: QuadField) -> Result<BigInt> {
    let eps = fundamental_unit(field);
    if eps.norm() != BigRational::one() {
        return Err(Error::NormMinusOne(field.d()));
    }
    let t = (eps.clone() + field.one()).trace();
    debug_assert!(arith::is_integer(&t));
    let delta = squarefree_part(t.numer())?.s;

    let witness = eps.scale(&BigRational::from_integer(delta.clone()));
    assert!(
        witness.sqrt_in_field().is_some(),
        "delta * eps is not a square in {field}"
    );
    let disc = BigInt::from(field.disc());
    assert!(disc.is_multiple_of(&delta), "delta {delta} does not divide {disc}");
    assert!(!delta.is_one() && delta != disc, "delta {delta} is trivial");
    Ok(delta)
}

/// The four equivalent conditions on the unit group, each computed on its own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PellReport {
    pub d: i128,
    pub tp_unit_exists: bool,
    pub norm_eps: i32,
    pub neg_pell_solvable: bool,
    pub has_p3mod4_divisor: bool,
}

impl PellReport {
    /// `tp_unit_exists <=> norm 1 <=> no solution of X^2 - D Y^2 = -1`, and a
    /// prime divisor `p = 3 mod 4` forces norm 1.
    pub fn is_consistent(&self) -> bool {
        let a = self.tp_unit_exists;
        let b = self.norm_eps == 1;
        let c = !self.neg_pell_solvable;
        a == b && b == c && (!self.has_p3mod4_divisor || b)
    }
}

pub fn pell_report(field: QuadField) -> PellReport {
    let eps = fundamental_unit(field);
    let norm_eps = if eps.norm() == BigRational::one() { 1 } else { -1 };
    // X^2 - D Y^2 = -1 is solvable iff the period of sqrt(D) is odd
    let cf = cf_sqrt(field.d()).expect("field radicand is a non-square");
    let neg_pell_solvable = cf.period.len() % 2 == 1;
    let mut has_p3mod4_divisor = false;
    let mut n = field.d();
    let mut p = 2i128;
    while p * p <= n {
        if n % p == 0 {
            has_p3mod4_divisor |= p % 4 == 3;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    has_p3mod4_divisor |= n > 1 && n % 4 == 3;
    PellReport {
        d: field.d(),
        tp_unit_exists: eps.is_totally_positive(),
        norm_eps,
        neg_pell_solvable,
        has_p3mod4_divisor,
    }
}

/// For `e` of norm `1`, `beta = conj(e) + 1` satisfies `e * beta^2 = Tr(e + 1)`.
pub fn lemma51_witness(e: &QuadElem) -> Result<(QuadElem, BigRational)> {
    if e.norm() != BigRational::one() {
        return Err(Error::NormNotOne(e.to_string()));
    }
    let f = e.field();
    let beta = e.conjugate() + f.one();
    if FieldElement::is_zero(&beta) {
        return Err(Error::DegenerateBeta);
    }
    let t = (e.clone() + f.one()).trace();
    assert_eq!(
        e.clone() * beta.clone() * beta.clone(),
        f.from_rational(t.clone()),
        "e * beta^2 differs from Tr(e + 1)"
    );
    Ok((beta, t))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignatureRank {
    pub rank: usize,
    pub quotient_size: usize,
    /// Sign vectors (true = negative) of `-1` and the fundamental unit.
    pub signs: [[bool; 2]; 2],
}

/// GF(2) rank of the sign map on `{-1, eps}` and the resulting number
/// `2^(2 - rank)` of totally positive unit classes modulo squares.
pub fn signature_rank(field: QuadField) -> SignatureRank {
    let eps = fundamental_unit(field);
    let sign = |e: &QuadElem| {
        let s = e.embedding_signs();
        [s[0] == Ordering::Less, s[1] == Ordering::Less]
    };
    let minus_one = sign(&field.from_int(-1));
    let eps_sign = sign(&eps);
    let as_bits = |v: [bool; 2]| (v[0] as u8) | (v[1] as u8) << 1;
    let (a, b) = (as_bits(minus_one), as_bits(eps_sign));
    let rank = match (a, b) {
        (0, 0) => 0,
        (x, y) if x == 0 || y == 0 || x == y => 1,
        _ => 2,
    };
    let quotient_size = 1 << (2 - rank);
    let direct = totally_positive_unit_classes(field);
    assert_eq!(quotient_size, direct, "signature rank disagrees with class count");
    SignatureRank {
        rank,
        quotient_size,
        signs: [minus_one, eps_sign],
    }
}

/// Counts the totally positive classes among the unit representatives
/// `{1, -1, eps, -eps}` modulo squares.
pub fn totally_positive_unit_classes(field: QuadField) -> usize {
    let eps = fundamental_unit(field);
    let reps = [field.one(), -field.one(), eps.clone(), -eps];
    reps.iter().filter(|u| u.is_totally_positive()).count()
}
