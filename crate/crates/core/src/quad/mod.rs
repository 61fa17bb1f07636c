//! Real quadratic fields `Q(sqrt(D))`.

mod units;

pub use units::{
    delta, fundamental_unit, lemma51_witness, pell_report, signature_rank,
    totally_positive_unit_classes, PellReport, SignatureRank,
};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, radical_enclosure, squarefree_part, Interval};
use crate::field::{FieldElement, NumberField};
use crate::{Error, Result};

/// `Q(sqrt(D))` for a squarefree `D >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadField {
    d: i128,
    disc: i128,
}

impl QuadField {
    pub fn new(d: i128) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidField(format!("radicand {d} must be at least 2")));
        }
        let sf = squarefree_part(&BigInt::from(d))?;
        if !sf.r.is_one() {
            return Err(Error::InvalidField(format!("radicand {d} is not squarefree")));
        }
        let disc = if d.rem_euclid(4) == 1 {
            d
        } else {
            d.checked_mul(4)
                .ok_or_else(|| Error::Overflow(format!("discriminant of Q(sqrt({d}))")))?
        };
        Ok(Self { d, disc })
    }

    /// The field generated by `sqrt(n)` for a positive non-square integer `n`.
    pub fn containing_sqrt(n: &BigInt) -> Result<Self> {
        let sf = squarefree_part(n)?;
        let d = sf
            .s
            .to_i128()
            .ok_or_else(|| Error::Overflow(sf.s.to_string()))?;
        Self::new(d)
    }

    pub fn d(&self) -> i128 {
        self.d
    }

    pub fn disc(&self) -> i128 {
        self.disc
    }

    pub fn d_big(&self) -> BigInt {
        BigInt::from(self.d)
    }

    pub fn elem(&self, x: BigRational, y: BigRational) -> QuadElem {
        QuadElem { field: *self, x, y }
    }

    pub fn sqrt_d(&self) -> QuadElem {
        self.elem(BigRational::zero(), BigRational::one())
    }

    /// Integral basis generator: `sqrt(D)` or `(1 + sqrt(D))/2`.
    pub fn omega(&self) -> QuadElem {
        if self.d.rem_euclid(4) == 1 {
            self.elem(arith::rat(1, 2), arith::rat(1, 2))
        } else {
            self.sqrt_d()
        }
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.d)
    }
}

impl Serialize for QuadField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            #[serde(rename = "D")]
            d: i128,
        }
        Repr { d: self.d }.serialize(s)
    }
}

/// `x + y*sqrt(D)` with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    field: QuadField,
    x: BigRational,
    y: BigRational,
}

impl QuadElem {
    pub fn new(field: QuadField, x: BigRational, y: BigRational) -> Self {
        Self { field, x, y }
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.field, self.x.clone(), -&self.y)
    }

    pub fn trace(&self) -> BigRational {
        &self.x + &self.x
    }

    fn norm_exact(&self) -> BigRational {
        &self.x * &self.x - BigRational::from_integer(self.field.d_big()) * &self.y * &self.y
    }

    /// Square root within the field: solves `x^2 + D y^2 = a`, `2xy = b`.
    pub fn sqrt_in_field(&self) -> Option<QuadElem> {
        let f = self.field;
        let d = BigRational::from_integer(f.d_big());
        if self.y.is_zero() {
            if let Some(r) = arith::rational_sqrt(&self.x) {
                return Some(f.elem(r, BigRational::zero()));
            }
            return arith::rational_sqrt(&(&self.x / &d)).map(|r| f.elem(BigRational::zero(), r));
        }
        let n = arith::rational_sqrt(&self.norm_exact())?;
        let two = arith::int(2);
        for cand in [(&self.x + &n) / &two, (&self.x - &n) / &two] {
            let Some(x) = arith::rational_sqrt(&cand) else {
                continue;
            };
            if x.is_zero() {
                continue;
            }
            let y = &self.y / (&two * &x);
            let s = f.elem(x, y);
            if &(s.clone() * s.clone()) == self {
                return Some(s);
            }
        }
        None
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(
            self.field, other.field,
            "arithmetic between elements of different quadratic fields"
        );
    }

    pub fn to_json(&self) -> QuadElemJson {
        QuadElemJson {
            d: self.field.d,
            x: self.x.to_string(),
            y: self.y.to_string(),
        }
    }

    pub fn from_json(j: &QuadElemJson) -> Result<Self> {
        let field = QuadField::new(j.d)?;
        Ok(field.elem(parse_rational(&j.x)?, parse_rational(&j.y)?))
    }
}

/// Serialized form `{"D": int, "x": "p/q", "y": "p/q"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadElemJson {
    #[serde(rename = "D")]
    pub d: i128,
    pub x: String,
    pub y: String,
}

impl Serialize for QuadElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = QuadElemJson::deserialize(d)?;
        QuadElem::from_json(&j).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}

/// Writes `c0 + c1*name1 + ...`, dropping zero terms and unit coefficients.
pub(crate) fn write_terms(
    f: &mut fmt::Formatter<'_>,
    constant: &BigRational,
    terms: &[(&BigRational, String)],
) -> fmt::Result {
    let mut first = true;
    if !constant.is_zero() {
        write!(f, "{constant}")?;
        first = false;
    }
    for (c, name) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        if a.is_one() {
            write!(f, "{name}")?;
        } else {
            write!(f, "{a}*{name}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.x, &[(&self.y, format!("sqrt({})", self.field.d))])
    }
}

impl Add for QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: QuadElem) -> QuadElem {
        &self + &rhs
    }
}

impl Add<&QuadElem> for &QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        self.check_same(rhs);
        QuadElem::new(self.field, &self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub for QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: QuadElem) -> QuadElem {
        &self - &rhs
    }
}

impl Sub<&QuadElem> for &QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        self.check_same(rhs);
        QuadElem::new(self.field, &self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Mul for QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: QuadElem) -> QuadElem {
        &self * &rhs
    }
}

impl Mul<&QuadElem> for &QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        self.check_same(rhs);
        let d = BigRational::from_integer(self.field.d_big());
        QuadElem::new(
            self.field,
            &self.x * &rhs.x + d * &self.y * &rhs.y,
            &self.x * &rhs.y + &self.y * &rhs.x,
        )
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::new(self.field, -self.x, -self.y)
    }
}

impl NumberField for QuadField {
    type Elem = QuadElem;

    fn degree(&self) -> usize {
        2
    }

    fn from_rational(&self, q: BigRational) -> QuadElem {
        self.elem(q, BigRational::zero())
    }

    fn radical(&self, k: &BigInt) -> Option<QuadElem> {
        if k.is_negative() {
            return None;
        }
        if k.is_zero() {
            return Some(self.zero());
        }
        let sf = squarefree_part(k).ok()?;
        let r = BigRational::from_integer(sf.r);
        if sf.s.is_one() {
            Some(self.elem(r, BigRational::zero()))
        } else if sf.s == self.d_big() {
            Some(self.elem(BigRational::zero(), r))
        } else {
            None
        }
    }

    fn integers_in_box(&self, bounds: &[(BigRational, BigRational)]) -> Vec<QuadElem> {
        assert_eq!(bounds.len(), 2);
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        let (lo1, hi1) = (f(&bounds[0].0), f(&bounds[0].1));
        let (lo2, hi2) = (f(&bounds[1].0), f(&bounds[1].1));
        if lo1 > hi1 || lo2 > hi2 {
            return Vec::new();
        }
        let sd = (self.d as f64).sqrt();
        let slack = |v: f64| 1.0 + 1e-9 * v.abs();
        // coordinates are counted in halves: x = a/2, y = b/2
        let half = self.d.rem_euclid(4) == 1;
        let step: i64 = if half { 1 } else { 2 };
        let ylo = (lo1 - hi2) / (2.0 * sd);
        let yhi = (hi1 - lo2) / (2.0 * sd);
        let b_lo = ((2.0 * ylo) - slack(ylo)).floor() as i64;
        let b_hi = ((2.0 * yhi) + slack(yhi)).ceil() as i64;
        let mut out = Vec::new();
        for b in b_lo..=b_hi {
            if b.rem_euclid(step) != 0 {
                continue;
            }
            let ys = b as f64 / 2.0 * sd;
            let xlo = (lo1 - ys).max(lo2 + ys);
            let xhi = (hi1 - ys).min(hi2 + ys);
            if xlo > xhi + 2.0 * slack(xhi) {
                continue;
            }
            let a_lo = (2.0 * xlo - slack(xlo)).floor() as i64;
            let a_hi = (2.0 * xhi + slack(xhi)).ceil() as i64;
            for a in a_lo..=a_hi {
                let ok_parity = if half {
                    (a - b).rem_euclid(2) == 0
                } else {
                    a.rem_euclid(2) == 0
                };
                if !ok_parity {
                    continue;
                }
                let e = self.elem(arith::rat(a, 2), arith::rat(b, 2));
                if in_box(&e, bounds) {
                    out.push(e);
                }
            }
        }
        out
    }
}

/// Exact check that every embedding of `e` lies in the matching closed interval.
pub(crate) fn in_box<E: FieldElement>(e: &E, bounds: &[(BigRational, BigRational)]) -> bool {
    let f = e.field();
    e.conjugates().iter().zip(bounds).all(|(c, (lo, hi))| {
        (c.clone() - f.from_rational(lo.clone())).signum() != Ordering::Less
            && (f.from_rational(hi.clone()) - c.clone()).signum() != Ordering::Less
    })
}

impl FieldElement for QuadElem {
    type Field = QuadField;

    fn field(&self) -> QuadField {
        self.field
    }

    fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    fn inverse(&self) -> Option<QuadElem> {
        if FieldElement::is_zero(self) {
            return None;
        }
        let n = self.norm_exact();
        Some(QuadElem::new(self.field, &self.x / &n, -&self.y / &n))
    }

    fn conjugates(&self) -> Vec<QuadElem> {
        vec![self.clone(), self.conjugate()]
    }

    fn signum(&self) -> Ordering {
        let sx = self.x.cmp(&BigRational::zero());
        let sy = self.y.cmp(&BigRational::zero());
        if sy == Ordering::Equal || sx == sy {
            return sx;
        }
        if sx == Ordering::Equal {
            return sy;
        }
        let x2 = &self.x * &self.x;
        let dy2 = BigRational::from_integer(self.field.d_big()) * &self.y * &self.y;
        if x2 > dy2 {
            sx
        } else {
            sy
        }
    }

    fn enclosure(&self, bits: u32) -> Interval {
        Interval::point(self.x.clone()) + radical_enclosure(&self.field.d_big(), bits).scale(&self.y)
    }

    fn is_integral(&self) -> bool {
        arith::is_integer(&self.trace()) && arith::is_integer(&self.norm_exact())
    }

    fn norm(&self) -> BigRational {
        self.norm_exact()
    }

    fn sqrt(&self) -> Option<QuadElem> {
        self.sqrt_in_field()
    }

    fn scale(&self, q: &BigRational) -> QuadElem {
        QuadElem::new(self.field, &self.x * q, &self.y * q)
    }

    fn to_rational(&self) -> Option<BigRational> {
        self.y.is_zero().then(|| self.x.clone())
    }
}

/// Square root of `e` in its field, if any.
pub fn quad_sqrt(e: &QuadElem) -> Option<QuadElem> {
    e.sqrt_in_field()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn q(d: i128) -> QuadField {
        QuadField::new(d).unwrap()
    }

    fn el(d: i128, x: BigRational, y: BigRational) -> QuadElem {
        q(d).elem(x, y)
    }

    #[test]
    fn discriminants() {
        assert_eq!(q(5).disc(), 5);
        assert_eq!(q(3).disc(), 12);
        assert_eq!(q(2).disc(), 8);
        assert!(QuadField::new(12).is_err());
        assert!(QuadField::new(1).is_err());
    }

    #[test]
    fn norm_trace_examples() {
        assert_eq!(el(3, int(2), int(1)).norm(), int(1));
        assert_eq!(el(3, int(3), int(1)).trace(), int(6));
        assert_eq!(q(7).from_rational(rat(3, 5)).norm(), rat(9, 25));
    }

    #[test]
    fn integrality() {
        assert!(el(21, rat(5, 2), rat(1, 2)).is_integral());
        assert!(!el(2, rat(1, 2), rat(1, 2)).is_integral());
        assert!(q(2).from_int(7).is_integral());
        assert!(!el(3, rat(1, 2), rat(1, 2)).is_integral());
    }

    #[test]
    fn total_positivity() {
        assert!(el(3, int(2), int(1)).is_totally_positive());
        assert!(!el(2, int(1), int(1)).is_totally_positive());
        assert!(!q(2).from_int(-1).is_totally_positive());
    }

    #[test]
    fn house_examples() {
        let h = el(3, int(2), int(1)).house();
        assert_eq!(h.elem(), &el(3, int(2), int(1)));
        assert!((h.to_f64() - 3.7320508).abs() < 1e-6);
        assert_eq!(q(3).from_int(5).house().elem(), &q(3).from_int(5));
        assert_eq!(el(2, int(1), int(-1)).house().elem(), &el(2, int(1), int(1)));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(quad_sqrt(&el(3, int(12), int(6))), Some(el(3, int(3), int(1))));
        assert_eq!(quad_sqrt(&el(3, int(2), int(1))), None);
        assert_eq!(quad_sqrt(&q(3).from_int(9)), Some(q(3).from_int(3)));
        assert_eq!(quad_sqrt(&q(3).from_int(12)), Some(el(3, int(0), int(2))));
        assert_eq!(quad_sqrt(&q(3).from_int(-1)), None);
    }

    #[test]
    fn display_and_json_round_trip() {
        let e = el(21, rat(5, 2), rat(1, 2));
        assert_eq!(e.to_string(), "5/2 + 1/2*sqrt(21)");
        assert_eq!(el(2, int(1), int(-1)).to_string(), "1 - sqrt(2)");
        assert_eq!(q(2).zero().to_string(), "0");
        let j = serde_json::to_string(&e).unwrap();
        assert_eq!(j, r#"{"D":21,"x":"5/2","y":"1/2"}"#);
        let back: QuadElem = serde_json::from_str(&j).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn exact_sign_near_cancellation() {
        // 1393 - 985*sqrt(2) ~ -3.6e-4
        assert_eq!(el(2, int(1393), int(-985)).signum(), Ordering::Less);
        assert_eq!(el(2, int(-1393), int(985)).signum(), Ordering::Greater);
    }

    #[test]
    fn box_enumeration_uses_half_integers() {
        let f = q(5);
        let b = vec![(int(0), int(2)), (int(0), int(2))];
        let pts = f.integers_in_box(&b);
        assert!(pts.contains(&f.from_int(1)));
        assert!(pts.contains(&f.from_int(0)));
        let phi = el(5, rat(1, 2), rat(1, 2));
        assert!(!pts.contains(&phi));
        assert!(pts.iter().all(|p| p.is_integral()));
    }
}
