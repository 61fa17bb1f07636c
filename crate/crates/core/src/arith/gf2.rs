//! Square classes of nonzero integers as vectors over GF(2).
//!
//! A squarefree integer `+-p1*...*pk` is identified with the set of its prime
//! divisors plus a sign bit; multiplication modulo squares is symmetric
//! difference. Subgroup membership is Gaussian elimination over the primes
//! that actually occur.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::factor::{is_perfect_square, split_square, DEFAULT_TRIAL_BOUND};
use super::ArithError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SquareClassVector {
    /// Sorted, distinct.
    primes: Vec<BigInt>,
    negative: bool,
}

impl SquareClassVector {
    pub fn one() -> Self {
        Self {
            primes: Vec::new(),
            negative: false,
        }
    }

    /// Square class of a nonzero integer.
    pub fn of_integer(n: &BigInt) -> Result<Self, ArithError> {
        let split = split_square(n, DEFAULT_TRIAL_BOUND)?;
        Ok(Self {
            primes: split.odd_primes,
            negative: split.negative,
        })
    }

    /// Square class of a nonzero rational `a/b`, i.e. of `a*b`.
    pub fn of_rational(q: &num_rational::BigRational) -> Result<Self, ArithError> {
        Ok(Self::of_integer(q.numer())?.mul(&Self::of_integer(q.denom())?))
    }

    pub fn primes(&self) -> &[BigInt] {
        &self.primes
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn is_trivial(&self) -> bool {
        self.primes.is_empty() && !self.negative
    }

    /// The squarefree integer this vector stands for.
    pub fn to_integer(&self) -> BigInt {
        let m: BigInt = self.primes.iter().product();
        if self.negative {
            -m
        } else {
            m
        }
    }

    /// Product modulo squares.
    pub fn mul(&self, other: &Self) -> Self {
        let mut primes = Vec::with_capacity(self.primes.len() + other.primes.len());
        let (mut i, mut j) = (0, 0);
        while i < self.primes.len() && j < other.primes.len() {
            match self.primes[i].cmp(&other.primes[j]) {
                std::cmp::Ordering::Less => {
                    primes.push(self.primes[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    primes.push(other.primes[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        primes.extend_from_slice(&self.primes[i..]);
        primes.extend_from_slice(&other.primes[j..]);
        Self {
            primes,
            negative: self.negative ^ other.negative,
        }
    }
}

impl fmt::Display for SquareClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_integer())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    fn highest(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + 63 - w.leading_zeros() as usize)
    }
}

struct Columns(BTreeMap<BigInt, usize>);

impl Columns {
    // column 0 is the sign
    fn new<'a>(vectors: impl Iterator<Item = &'a SquareClassVector>) -> Self {
        let mut map = BTreeMap::new();
        for v in vectors {
            for p in &v.primes {
                let next = map.len() + 1;
                map.entry(p.clone()).or_insert(next);
            }
        }
        Columns(map)
    }

    fn width(&self) -> usize {
        self.0.len() + 1
    }

    fn row(&self, v: &SquareClassVector) -> Bits {
        let mut b = Bits::zeros(self.width());
        if v.negative {
            b.set(0);
        }
        for p in &v.primes {
            b.set(self.0[p]);
        }
        b
    }
}

/// Echelon basis keyed by leading column, tracking which inputs were combined.
struct XorBasis {
    pivots: BTreeMap<usize, (Bits, Bits)>,
    inputs: usize,
}

impl XorBasis {
    fn new(inputs: usize) -> Self {
        Self {
            pivots: BTreeMap::new(),
            inputs,
        }
    }

    fn reduce(&self, mut row: Bits, mut combo: Bits) -> (Bits, Bits) {
        while let Some(h) = row.highest() {
            match self.pivots.get(&h) {
                Some((prow, pcombo)) => {
                    row.xor(prow);
                    combo.xor(pcombo);
                }
                None => break,
            }
        }
        (row, combo)
    }

    fn insert(&mut self, index: usize, row: Bits) -> bool {
        let mut combo = Bits::zeros(self.inputs);
        combo.set(index);
        let (row, combo) = self.reduce(row, combo);
        match row.highest() {
            Some(h) => {
                self.pivots.insert(h, (row, combo));
                true
            }
            None => false,
        }
    }
}

/// Finds `S0` (indices into `basis`) with `prod(S0) == target` modulo
/// squares, or `None` when the target is outside the span.
pub fn gf2_express(
    target: &SquareClassVector,
    basis: &[SquareClassVector],
) -> Option<Vec<usize>> {
    let cols = Columns::new(basis.iter().chain(std::iter::once(target)));
    let mut xb = XorBasis::new(basis.len());
    for (i, v) in basis.iter().enumerate() {
        xb.insert(i, cols.row(v));
    }
    let (rest, combo) = xb.reduce(cols.row(target), Bits::zeros(basis.len()));
    if rest.highest().is_some() {
        return None;
    }
    let subset: Vec<usize> = (0..basis.len()).filter(|&i| combo.get(i)).collect();

    let product: BigInt = subset
        .iter()
        .map(|&i| basis[i].to_integer())
        .product::<BigInt>()
        * target.to_integer();
    assert!(
        product.is_positive() && is_perfect_square(&product),
        "GF(2) elimination produced a non-square product"
    );
    Some(subset)
}

/// Dimension of the span of the given square classes.
pub fn gf2_rank(vectors: &[SquareClassVector]) -> usize {
    let cols = Columns::new(vectors.iter());
    let mut xb = XorBasis::new(vectors.len());
    vectors
        .iter()
        .enumerate()
        .filter(|(i, v)| xb.insert(*i, cols.row(v)))
        .count()
}

/// Convenience: square class of a small integer.
pub fn class_of(n: i64) -> SquareClassVector {
    SquareClassVector::of_integer(&BigInt::from(n)).expect("small integers factor")
}

#[doc(hidden)]
pub fn brute_force_express(
    target: &SquareClassVector,
    basis: &[SquareClassVector],
) -> Option<Vec<usize>> {
    assert!(basis.len() <= 20);
    (0u32..1 << basis.len()).find_map(|mask| {
        let mut acc = target.clone();
        for (i, b) in basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = acc.mul(b);
            }
        }
        acc.is_trivial()
            .then(|| (0..basis.len()).filter(|i| mask >> i & 1 == 1).collect())
    })
}

impl Default for SquareClassVector {
    fn default() -> Self {
        Self::one()
    }
}

impl From<&SquareClassVector> for BigInt {
    fn from(v: &SquareClassVector) -> BigInt {
        v.to_integer()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(gf2_express(&class_of(6), &[class_of(2), class_of(3)]), Some(vec![0, 1]));
        assert_eq!(gf2_express(&class_of(6), &[class_of(2), class_of(5)]), None);
        assert_eq!(gf2_express(&class_of(1), &[class_of(7), class_of(11)]), Some(vec![]));
        assert_eq!(gf2_express(&class_of(1), &[]), Some(vec![]));
    }

    #[test]
    fn sign_has_its_own_coordinate() {
        assert_eq!(gf2_express(&class_of(-3), &[class_of(3)]), None);
        assert_eq!(gf2_express(&class_of(-3), &[class_of(-1), class_of(3)]), Some(vec![0, 1]));
    }

    #[test]
    fn dependent_basis() {
        let basis = [class_of(6), class_of(10), class_of(15), class_of(7)];
        assert_eq!(gf2_rank(&basis), 3);
        let s = gf2_express(&class_of(15), &basis).unwrap();
        let prod: BigInt = s.iter().map(|&i| basis[i].to_integer()).product::<BigInt>() * 15;
        assert!(is_perfect_square(&prod));
    }

    #[test]
    fn mul_is_symmetric_difference() {
        assert_eq!(class_of(6).mul(&class_of(10)), class_of(15));
        assert_eq!(class_of(-2).mul(&class_of(-8)), class_of(1));
        assert_eq!(class_of(12).to_integer(), BigInt::from(3));
    }
}
