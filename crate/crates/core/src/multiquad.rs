//! Multiquadratic fields `Q(sqrt(g_0), ..., sqrt(g_{r-1}))` for square-class
//! independent generators, with basis `b_S = sqrt(prod_{i in S} g_i)` indexed
//! by subsets `S` (bit masks).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{gf2_rank, SquareClassVector};
use crate::biquad::BiquadElem;
use crate::field::FieldElement;
use crate::quad::QuadElem;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiquadField {
    gens: Vec<BigInt>,
}

impl MultiquadField {
    /// Fails unless the generators are independent modulo squares, so that
    /// the field has degree `2^r`.
    pub fn new(gens: Vec<BigInt>) -> Result<Self> {
        let classes = gens
            .iter()
            .map(SquareClassVector::of_integer)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if gens.len() > 12 || gf2_rank(&classes) != gens.len() {
            return Err(Error::InvalidField(format!(
                "generators {gens:?} are not independent modulo squares"
            )));
        }
        Ok(Self { gens })
    }

    pub fn gens(&self) -> &[BigInt] {
        &self.gens
    }

    pub fn degree(&self) -> usize {
        1 << self.gens.len()
    }

    pub fn zero(&self) -> MultiquadElem {
        MultiquadElem {
            field: self.clone(),
            c: vec![BigRational::zero(); self.degree()],
        }
    }

    pub fn from_rational(&self, q: BigRational) -> MultiquadElem {
        let mut e = self.zero();
        e.c[0] = q;
        e
    }

    /// `q * b_S`.
    pub fn monomial(&self, mask: usize, q: BigRational) -> MultiquadElem {
        let mut e = self.zero();
        e.c[mask] = q;
        e
    }

    fn product_constant(&self, s: usize, t: usize) -> BigInt {
        let common = s & t;
        (0..self.gens.len())
            .filter(|i| common >> i & 1 == 1)
            .map(|i| self.gens[i].clone())
            .product()
    }

    /// Image of `x + y sqrt(D)` given the subset `mask` with `prod g_S = D r^2`.
    pub fn embed_quad(&self, e: &QuadElem, mask: usize, r: &BigInt) -> MultiquadElem {
        let mut out = self.from_rational(e.x().clone());
        out.c[mask] = e.y() / BigRational::from_integer(r.clone());
        out
    }

    /// Image of a biquadratic element whose radicands `d1`, `d2` are the
    /// generators at positions `i1`, `i2`.
    pub fn embed_biquad(&self, e: &BiquadElem, i1: usize, i2: usize) -> Result<MultiquadElem> {
        let f = e.field();
        if self.gens[i1] != BigInt::from(f.d1()) || self.gens[i2] != BigInt::from(f.d2()) {
            return Err(Error::CoercionFailure(e.to_string()));
        }
        let (g12, _, _) = f.g();
        let c = e.coords();
        let mut out = self.from_rational(c[0].clone());
        out.c[1 << i1] = c[1].clone();
        out.c[1 << i2] = c[2].clone();
        // sqrt(d3) = sqrt(d1 d2) / g12
        out.c[(1 << i1) | (1 << i2)] = &c[3] / BigRational::from_integer(BigInt::from(g12));
        Ok(out)
    }
}

impl fmt::Display for MultiquadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(|g| format!("sqrt({g})")).collect();
        write!(f, "Q({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiquadElem {
    field: MultiquadField,
    c: Vec<BigRational>,
}

impl MultiquadElem {
    pub fn coords(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// The automorphism `sqrt(g_i) -> -sqrt(g_i)` for every `i` in `negate`.
    pub fn automorphism(&self, negate: usize) -> MultiquadElem {
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(s, x)| {
                if (s & negate).count_ones() % 2 == 1 {
                    -x.clone()
                } else {
                    x.clone()
                }
            })
            .collect();
        MultiquadElem {
            field: self.field.clone(),
            c,
        }
    }

    /// Relative norm to the fixed field of `automorphism(negate)`.
    pub fn norm_to_fixed_field(&self, negate: usize) -> MultiquadElem {
        self * &self.automorphism(negate)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.c[1..].iter().all(|x| x.is_zero()).then(|| self.c[0].clone())
    }
}

impl Add<&MultiquadElem> for &MultiquadElem {
    type Output = MultiquadElem;
    fn add(self, rhs: &MultiquadElem) -> MultiquadElem {
        assert_eq!(self.field, rhs.field);
        MultiquadElem {
            field: self.field.clone(),
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&MultiquadElem> for &MultiquadElem {
    type Output = MultiquadElem;
    fn sub(self, rhs: &MultiquadElem) -> MultiquadElem {
        assert_eq!(self.field, rhs.field);
        MultiquadElem {
            field: self.field.clone(),
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<&MultiquadElem> for &MultiquadElem {
    type Output = MultiquadElem;
    fn mul(self, rhs: &MultiquadElem) -> MultiquadElem {
        assert_eq!(self.field, rhs.field);
        let f = &self.field;
        let mut out = f.zero();
        for (s, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = f.product_constant(s, t);
                let term = a * b;
                out.c[s ^ t] += if k.is_one() {
                    term
                } else {
                    term * BigRational::from_integer(k)
                };
            }
        }
        out
    }
}

impl Neg for MultiquadElem {
    type Output = MultiquadElem;
    fn neg(self) -> MultiquadElem {
        MultiquadElem {
            field: self.field,
            c: self.c.into_iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Display for MultiquadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (s, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if s == 0 {
                parts.push(x.to_string());
            } else {
                let rad: BigInt = (0..self.field.gens.len())
                    .filter(|i| s >> i & 1 == 1)
                    .map(|i| self.field.gens[i].clone())
                    .product();
                parts.push(format!("{x}*sqrt({rad})"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
