//! Real biquadratic fields `Q(sqrt(d1), sqrt(d2))` over the basis
//! `(1, sqrt(d1), sqrt(d2), sqrt(d3))`.

mod family;

pub use family::{
    cor63_test, has_tp_nonsquare_unit, prop61_identity_check, prop65_admissible, prop65_family, Cor63Report,
    Prop65Checks, Prop65Instance,
};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, radical_enclosure, squarefree_part, Interval};
use crate::field::{FieldElement, NumberField};
use crate::quad::{in_box, parse_rational, quad_sqrt, write_terms, QuadElem, QuadField};
use crate::{Error, Result};

/// `Q(sqrt(d1), sqrt(d2))` with `d3` the squarefree part of `d1*d2` and
/// `sqrt(di)*sqrt(dj) = g_ij*sqrt(dk)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiquadField {
    d: [i128; 3],
    g12: i128,
    g13: i128,
    g23: i128,
}

impl BiquadField {
    pub fn new(d1: i128, d2: i128) -> Result<Self> {
        for d in [d1, d2] {
            if d < 2 || !squarefree_part(&BigInt::from(d))?.r.is_one() {
                return Err(Error::InvalidField(format!("{d} is not a squarefree integer > 1")));
            }
        }
        if d1 == d2 {
            return Err(Error::InvalidField(format!("radicands coincide: {d1}")));
        }
        let prod = d1
            .checked_mul(d2)
            .ok_or_else(|| Error::Overflow(format!("{d1}*{d2}")))?;
        let sf = squarefree_part(&BigInt::from(prod))?;
        let d3 = sf.s.to_i128().expect("divides an i128");
        let g12 = sf.r.to_i128().expect("divides an i128");
        let (g13, g23) = (d1 / g12, d2 / g12);
        debug_assert_eq!(d1 * d3, g13 * g13 * d2);
        debug_assert_eq!(d2 * d3, g23 * g23 * d1);
        Ok(Self {
            d: [d1, d2, d3],
            g12,
            g13,
            g23,
        })
    }

    pub fn d1(&self) -> i128 {
        self.d[0]
    }

    pub fn d2(&self) -> i128 {
        self.d[1]
    }

    pub fn d3(&self) -> i128 {
        self.d[2]
    }

    /// `d_i` for `i` in `1..=3`.
    pub fn d(&self, i: usize) -> i128 {
        self.d[i - 1]
    }

    pub fn g(&self) -> (i128, i128, i128) {
        (self.g12, self.g13, self.g23)
    }

    /// The quadratic subfield `K_i = Q(sqrt(d_i))`.
    pub fn subfield(&self, i: usize) -> QuadField {
        QuadField::new(self.d(i)).expect("radicands are squarefree")
    }

    pub fn elem(&self, coords: [BigRational; 4]) -> BiquadElem {
        BiquadElem {
            field: *self,
            c: coords,
        }
    }

    pub fn from_ints(&self, coords: [i64; 4]) -> BiquadElem {
        self.elem(coords.map(arith::int))
    }

    /// `sqrt(d_i)`.
    pub fn radical_elem(&self, i: usize) -> BiquadElem {
        let mut c: [BigRational; 4] = Default::default();
        c[i] = BigRational::one();
        self.elem(c)
    }

    /// Image of an element of `K_i` in this field.
    pub fn embed(&self, q: &QuadElem, i: usize) -> BiquadElem {
        assert_eq!(q.field().d(), self.d(i), "{q} does not live in K_{i}");
        let mut c: [BigRational; 4] = Default::default();
        c[0] = q.x().clone();
        c[i] = q.y().clone();
        self.elem(c)
    }
}

impl fmt::Display for BiquadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}), sqrt({}))", self.d[0], self.d[1])
    }
}

impl Serialize for BiquadField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            d1: i128,
            d2: i128,
            d3: i128,
        }
        Repr {
            d1: self.d1(),
            d2: self.d2(),
            d3: self.d3(),
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiquadElem {
    field: BiquadField,
    c: [BigRational; 4],
}

impl BiquadElem {
    pub fn coords(&self) -> &[BigRational; 4] {
        &self.c
    }

    /// `sigma_i` fixes `sqrt(d_i)` and negates the other two radicals;
    /// `i = 0` is the identity.
    pub fn sigma(&self, i: usize) -> BiquadElem {
        let mut c = self.c.clone();
        for (k, x) in c.iter_mut().enumerate().skip(1) {
            if k != i && i != 0 {
                *x = -x.clone();
            }
        }
        BiquadElem {
            field: self.field,
            c,
        }
    }

    /// `Norm_{K/K_i}(e) = e * sigma_i(e)` as an element of `K_i`.
    pub fn rel_norm(&self, i: usize) -> Result<QuadElem> {
        self.coerce(&(self * &self.sigma(i)), i)
    }

    /// `e + sigma_i(e)` as an element of `K_i`.
    pub fn rel_trace(&self, i: usize) -> Result<QuadElem> {
        self.coerce(&(self + &self.sigma(i)), i)
    }

    fn coerce(&self, v: &BiquadElem, i: usize) -> Result<QuadElem> {
        let off = (1..4).filter(|&k| k != i).any(|k| !v.c[k].is_zero());
        if off {
            return Err(Error::CoercionFailure(v.to_string()));
        }
        Ok(self
            .field
            .subfield(i)
            .elem(v.c[0].clone(), v.c[i].clone()))
    }

    /// The element as a member of `K_i`, if it lies there.
    pub fn in_subfield(&self, i: usize) -> Option<QuadElem> {
        self.coerce(self, i).ok()
    }

    /// Left multiplication matrix on the basis `(1, sqrt d1, sqrt d2, sqrt d3)`;
    /// column `j` holds the coordinates of `e * b_j`.
    pub fn regular_matrix(&self) -> [[BigRational; 4]; 4] {
        let f = self.field;
        let mut m: [[BigRational; 4]; 4] = Default::default();
        for j in 0..4 {
            let col = self * &f.radical_elem_or_one(j);
            for i in 0..4 {
                m[i][j] = col.c[i].clone();
            }
        }
        m
    }

    /// Characteristic polynomial `x^4 + a3 x^3 + ... + a0` of the regular
    /// representation, as `[a0, a1, a2, a3, 1]` (Faddeev-LeVerrier).
    pub fn charpoly(&self) -> [BigRational; 5] {
        let a = self.regular_matrix();
        let n = 4;
        let mut coeffs: [BigRational; 5] = Default::default();
        coeffs[n] = BigRational::one();
        let mut m: [[BigRational; 4]; 4] = Default::default();
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = mat_mul(&a, &m);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] += &coeffs[n - k + 1];
            }
            m = next;
            let am = mat_mul(&a, &m);
            let tr: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
            coeffs[n - k] = -tr / arith::int(k as i64);
        }
        coeffs
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(
            self.field, other.field,
            "arithmetic between elements of different biquadratic fields"
        );
    }

    pub fn to_json(&self) -> BiquadElemJson {
        BiquadElemJson {
            d1: self.field.d[0],
            d2: self.field.d[1],
            coords: self.c.iter().map(|x| x.to_string()).collect(),
        }
    }

    pub fn from_json(j: &BiquadElemJson) -> Result<Self> {
        let f = BiquadField::new(j.d1, j.d2)?;
        if j.coords.len() != 4 {
            return Err(Error::Parse(format!("expected 4 coordinates, got {}", j.coords.len())));
        }
        let mut c: [BigRational; 4] = Default::default();
        for (k, s) in j.coords.iter().enumerate() {
            c[k] = parse_rational(s)?;
        }
        Ok(f.elem(c))
    }

    /// Exact sign through the nested representation `A + B*sqrt(d2)` with
    /// `A, B` in `Q(sqrt d1)`. Independent of the interval route.
    pub fn signum_nested(&self) -> Ordering {
        let f = self.field;
        let k1 = f.subfield(1);
        let a = k1.elem(self.c[0].clone(), self.c[1].clone());
        let g12 = arith::int(f.g12);
        let b = k1.elem(self.c[2].clone(), &self.c[3] / &g12);
        let (sa, sb) = (a.signum(), b.signum());
        if sb == Ordering::Equal || sa == sb {
            return sa;
        }
        if sa == Ordering::Equal {
            return sb;
        }
        let diff = a.clone() * a - (b.clone() * b).scale(&arith::int(f.d[1]));
        match diff.signum() {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => unreachable!("A^2 = d2 B^2 forces A = B = 0"),
        }
    }
}

impl BiquadField {
    fn radical_elem_or_one(&self, j: usize) -> BiquadElem {
        if j == 0 {
            self.one()
        } else {
            self.radical_elem(j)
        }
    }
}

fn mat_mul(a: &[[BigRational; 4]; 4], b: &[[BigRational; 4]; 4]) -> [[BigRational; 4]; 4] {
    let mut out: [[BigRational; 4]; 4] = Default::default();
    for i in 0..4 {
        for j in 0..4 {
            let mut s = BigRational::zero();
            for k in 0..4 {
                if !a[i][k].is_zero() && !b[k][j].is_zero() {
                    s += &a[i][k] * &b[k][j];
                }
            }
            out[i][j] = s;
        }
    }
    out
}

/// Serialized form `{"d1": int, "d2": int, "coords": ["p/q"; 4]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiquadElemJson {
    pub d1: i128,
    pub d2: i128,
    pub coords: Vec<String>,
}

impl Serialize for BiquadElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiquadElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = BiquadElemJson::deserialize(d)?;
        BiquadElem::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for BiquadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.field.d;
        write_terms(
            f,
            &self.c[0],
            &[
                (&self.c[1], format!("sqrt({})", d[0])),
                (&self.c[2], format!("sqrt({})", d[1])),
                (&self.c[3], format!("sqrt({})", d[2])),
            ],
        )
    }
}

impl Add<&BiquadElem> for &BiquadElem {
    type Output = BiquadElem;
    fn add(self, rhs: &BiquadElem) -> BiquadElem {
        self.check_same(rhs);
        BiquadElem {
            field: self.field,
            c: std::array::from_fn(|k| &self.c[k] + &rhs.c[k]),
        }
    }
}

impl Sub<&BiquadElem> for &BiquadElem {
    type Output = BiquadElem;
    fn sub(self, rhs: &BiquadElem) -> BiquadElem {
        self.check_same(rhs);
        BiquadElem {
            field: self.field,
            c: std::array::from_fn(|k| &self.c[k] - &rhs.c[k]),
        }
    }
}

impl Mul<&BiquadElem> for &BiquadElem {
    type Output = BiquadElem;
    fn mul(self, rhs: &BiquadElem) -> BiquadElem {
        self.check_same(rhs);
        let f = self.field;
        let [a0, a1, a2, a3] = &self.c;
        let [b0, b1, b2, b3] = &rhs.c;
        let r = |n: i128| BigRational::from_integer(BigInt::from(n));
        let (d1, d2, d3) = (r(f.d[0]), r(f.d[1]), r(f.d[2]));
        let (g12, g13, g23) = (r(f.g12), r(f.g13), r(f.g23));
        let c0 = a0 * b0 + d1 * a1 * b1 + d2 * a2 * b2 + d3 * a3 * b3;
        let c1 = a0 * b1 + a1 * b0 + g23 * (a2 * b3 + a3 * b2);
        let c2 = a0 * b2 + a2 * b0 + g13 * (a1 * b3 + a3 * b1);
        let c3 = a0 * b3 + a3 * b0 + g12 * (a1 * b2 + a2 * b1);
        BiquadElem {
            field: f,
            c: [c0, c1, c2, c3],
        }
    }
}

impl Add for BiquadElem {
    type Output = BiquadElem;
    fn add(self, rhs: BiquadElem) -> BiquadElem {
        &self + &rhs
    }
}

impl Sub for BiquadElem {
    type Output = BiquadElem;
    fn sub(self, rhs: BiquadElem) -> BiquadElem {
        &self - &rhs
    }
}

impl Mul for BiquadElem {
    type Output = BiquadElem;
    fn mul(self, rhs: BiquadElem) -> BiquadElem {
        &self * &rhs
    }
}

impl Neg for BiquadElem {
    type Output = BiquadElem;
    fn neg(self) -> BiquadElem {
        BiquadElem {
            field: self.field,
            c: self.c.map(|x| -x),
        }
    }
}

impl NumberField for BiquadField {
    type Elem = BiquadElem;

    fn degree(&self) -> usize {
        4
    }

    fn from_rational(&self, q: BigRational) -> BiquadElem {
        let mut c: [BigRational; 4] = Default::default();
        c[0] = q;
        self.elem(c)
    }

    fn radical(&self, k: &BigInt) -> Option<BiquadElem> {
        if k.is_negative() {
            return None;
        }
        if k.is_zero() {
            return Some(self.zero());
        }
        let sf = squarefree_part(k).ok()?;
        let r = BigRational::from_integer(sf.r);
        if sf.s.is_one() {
            return Some(self.from_rational(r));
        }
        let i = (0..3).find(|&i| sf.s == BigInt::from(self.d[i]))?;
        let mut c: [BigRational; 4] = Default::default();
        c[i + 1] = r;
        Some(self.elem(c))
    }

    fn integers_in_box(&self, bounds: &[(BigRational, BigRational)]) -> Vec<BiquadElem> {
        assert_eq!(bounds.len(), 4);
        let lo: Vec<f64> = bounds.iter().map(|b| b.0.to_f64().unwrap_or(f64::NAN)).collect();
        let hi: Vec<f64> = bounds.iter().map(|b| b.1.to_f64().unwrap_or(f64::NAN)).collect();
        if (0..4).any(|j| lo[j] > hi[j]) {
            return Vec::new();
        }
        // embedding j has value x0 + SIGNS[j][k] * x_k * sqrt(d_k)
        const SIGNS: [[f64; 3]; 4] = [
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ];
        let roots: Vec<f64> = self.d.iter().map(|&d| (d as f64).sqrt()).collect();
        let slack = |v: f64| 1.0 + 1e-9 * v.abs();
        // x_k sqrt(d_k) = (1/4) sum_j SIGNS[j][k] e_j
        let range = |k: usize| {
            let (mut a, mut b) = (0.0, 0.0);
            for j in 0..4 {
                let s = SIGNS[j][k];
                if s > 0.0 {
                    a += lo[j];
                    b += hi[j];
                } else {
                    a -= hi[j];
                    b -= lo[j];
                }
            }
            let (a, b) = (a / 4.0 / roots[k], b / 4.0 / roots[k]);
            (
                (4.0 * a - slack(a)).floor() as i64,
                (4.0 * b + slack(b)).ceil() as i64,
            )
        };
        let (r1, r2, r3) = (range(0), range(1), range(2));
        let mut out = Vec::new();
        for q1 in r1.0..=r1.1 {
            for q2 in r2.0..=r2.1 {
                for q3 in r3.0..=r3.1 {
                    let xs = [q1 as f64 / 4.0, q2 as f64 / 4.0, q3 as f64 / 4.0];
                    let mut x0lo = f64::NEG_INFINITY;
                    let mut x0hi = f64::INFINITY;
                    for j in 0..4 {
                        let rest: f64 = (0..3).map(|k| SIGNS[j][k] * xs[k] * roots[k]).sum();
                        x0lo = x0lo.max(lo[j] - rest);
                        x0hi = x0hi.min(hi[j] - rest);
                    }
                    if x0lo > x0hi + 2.0 * slack(x0hi) {
                        continue;
                    }
                    let a = (4.0 * x0lo - slack(x0lo)).floor() as i64;
                    let b = (4.0 * x0hi + slack(x0hi)).ceil() as i64;
                    for q0 in a..=b {
                        let e = self.elem([
                            arith::rat(q0, 4),
                            arith::rat(q1, 4),
                            arith::rat(q2, 4),
                            arith::rat(q3, 4),
                        ]);
                        if e.traces_integral() && in_box(&e, bounds) && e.is_integral() {
                            out.push(e);
                        }
                    }
                }
            }
        }
        out
    }
}

impl BiquadElem {
    /// Necessary condition for integrality: every relative trace is an
    /// integer of its quadratic subfield.
    fn traces_integral(&self) -> bool {
        (1..4).all(|i| self.rel_trace(i).map(|t| t.is_integral()).unwrap_or(false))
    }
}

impl FieldElement for BiquadElem {
    type Field = BiquadField;

    fn field(&self) -> BiquadField {
        self.field
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    fn inverse(&self) -> Option<BiquadElem> {
        if FieldElement::is_zero(self) {
            return None;
        }
        let others = &(&self.sigma(1) * &self.sigma(2)) * &self.sigma(3);
        let n = (self * &others).c[0].clone();
        Some(others.scale(&n.recip()))
    }

    fn conjugates(&self) -> Vec<BiquadElem> {
        (0..4).map(|i| self.sigma(i)).collect()
    }

    fn signum(&self) -> Ordering {
        if FieldElement::is_zero(self) {
            return Ordering::Equal;
        }
        let mut bits = 32;
        loop {
            if let Some(s) = self.enclosure(bits).sign() {
                return s;
            }
            bits *= 2;
        }
    }

    fn enclosure(&self, bits: u32) -> Interval {
        let mut acc = Interval::point(self.c[0].clone());
        for k in 1..4 {
            if !self.c[k].is_zero() {
                acc = acc
                    + radical_enclosure(&BigInt::from(self.field.d[k - 1]), bits).scale(&self.c[k]);
            }
        }
        acc
    }

    fn is_integral(&self) -> bool {
        self.charpoly().iter().all(arith::is_integer)
    }

    fn norm(&self) -> BigRational {
        self.charpoly()[0].clone()
    }

    fn sqrt(&self) -> Option<BiquadElem> {
        biquad_sqrt(self)
    }

    fn scale(&self, q: &BigRational) -> BiquadElem {
        BiquadElem {
            field: self.field,
            c: std::array::from_fn(|k| &self.c[k] * q),
        }
    }

    fn to_rational(&self) -> Option<BigRational> {
        self.c[1..]
            .iter()
            .all(|x| x.is_zero())
            .then(|| self.c[0].clone())
    }
}

/// A square root of `e` in its field, found through the relative norms.
pub fn biquad_sqrt(e: &BiquadElem) -> Option<BiquadElem> {
    let f = e.field;
    if FieldElement::is_zero(e) {
        return Some(f.zero());
    }
    for i in 1..4 {
        let ni = e.rel_norm(i).expect("relative norm lies in K_i");
        let Some(root) = quad_sqrt(&ni) else {
            continue;
        };
        let tr = e.rel_trace(i).expect("relative trace lies in K_i");
        for n in [root.clone(), -root.clone()] {
            let two_n = n.scale(&arith::int(2));
            let Some(t) = quad_sqrt(&(tr.clone() + two_n)) else {
                continue;
            };
            if FieldElement::is_zero(&t) {
                continue;
            }
            let t_inv = f.embed(&t.inverse().expect("nonzero"), i);
            let s = &(e + &f.embed(&n, i)) * &t_inv;
            if &(&s * &s) == e {
                return Some(s);
            }
        }
    }
    None
}
