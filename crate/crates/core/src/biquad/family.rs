//! Square classes of totally positive units in biquadratic fields: the
//! relative-norm identity, the square-class criterion and an explicit family
//! of units outside `K^2 Q^x`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{BiquadElem, BiquadField};
use crate::arith::{self, cf_sqrt, squarefree_part};
use crate::field::{FieldElement, NumberField};
use crate::quad::{quad_sqrt, QuadElem};
use crate::{Error, Result};

/// Checks `e^2 = N(e)^-1 * prod_i Norm_{K/K_i}(e)` exactly.
pub fn prop61_identity_check(e: &BiquadElem) -> Result<bool> {
    let f = e.field();
    let n = e.norm();
    if n == BigRational::from_integer(0.into()) {
        return Err(Error::DivisionByZero);
    }
    let mut prod = f.one();
    for i in 1..4 {
        prod = prod * f.embed(&e.rel_norm(i)?, i);
    }
    Ok(e.clone() * e.clone() == prod.scale(&n.recip()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cor63Report {
    pub norms_square: [bool; 3],
    pub in_q_square_class: bool,
    /// Totally positive `eps_i` in `K_i` with `alpha = eps_1 eps_2 eps_3`.
    pub decomposition: Option<[QuadElem; 3]>,
    /// Index `i` of a subfield whose relative norm is not a square.
    pub nonsquare_subfield: Option<usize>,
}

/// Whether `Q(sqrt d)` has a totally positive unit that is not a square, i.e.
/// whether `X^2 - d Y^2 = -1` has no solution.
pub fn has_tp_nonsquare_unit(d: i128) -> bool {
    let mut n = d;
    let mut p = 2i128;
    while p * p <= n && p < 1000 {
        if n % p == 0 {
            if p % 4 == 3 {
                return true;
            }
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    cf_sqrt(d).map(|cf| cf.period.len() % 2 == 0).unwrap_or(false)
}

/// Decides whether the totally positive unit `alpha` lies in `K^2 Q^x` by
/// testing whether each relative norm is a square in its subfield.
pub fn cor63_test(alpha: &BiquadElem) -> Result<Cor63Report> {
    let f = alpha.field();
    if !(alpha.is_unit() && alpha.is_totally_positive()) {
        return Err(Error::NotTotallyPositiveUnit(alpha.to_string()));
    }
    if !(1..4).any(|i| has_tp_nonsquare_unit(f.d(i))) {
        return Err(Error::PreconditionUnverifiable(f.to_string()));
    }
    let norms: Vec<QuadElem> = (1..4).map(|i| alpha.rel_norm(i)).collect::<Result<_>>()?;
    let roots: Vec<Option<QuadElem>> = norms.iter().map(quad_sqrt).collect();
    let norms_square = [roots[0].is_some(), roots[1].is_some(), roots[2].is_some()];
    let in_q_square_class = norms_square.iter().all(|&b| b);
    let nonsquare_subfield = norms_square.iter().position(|&b| !b).map(|k| k + 1);

    let decomposition = if in_q_square_class {
        let roots: Vec<QuadElem> = roots.into_iter().map(|r| r.expect("checked")).collect();
        Some(decompose(alpha, &roots).expect("alpha is +- the product of the relative roots"))
    } else {
        None
    };
    Ok(Cor63Report {
        norms_square,
        in_q_square_class,
        decomposition,
        nonsquare_subfield,
    })
}

/// Chooses signs of the relative square roots so that their product is
/// `alpha`, preferring totally positive factors.
fn decompose(alpha: &BiquadElem, roots: &[QuadElem]) -> Option<[QuadElem; 3]> {
    let f = alpha.field();
    let mut best: Option<([QuadElem; 3], usize)> = None;
    for mask in 0u8..8 {
        let eps: [QuadElem; 3] = std::array::from_fn(|k| {
            if mask >> k & 1 == 1 {
                -roots[k].clone()
            } else {
                roots[k].clone()
            }
        });
        let prod = (1..4).fold(f.one(), |acc, i| acc * f.embed(&eps[i - 1], i));
        if &prod != alpha {
            continue;
        }
        let score = eps.iter().filter(|e| e.is_totally_positive()).count();
        if best.as_ref().is_none_or(|(_, s)| score > *s) {
            best = Some((eps, score));
        }
    }
    best.map(|(e, _)| e)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop65Checks {
    pub rel_norm_1: bool,
    pub rel_norm_2: bool,
    pub rel_norm_3: bool,
    pub totally_positive: bool,
    pub unit: bool,
    pub not_in_square_class: bool,
}

impl Prop65Checks {
    pub fn all(&self) -> bool {
        self.rel_norm_1
            && self.rel_norm_2
            && self.rel_norm_3
            && self.totally_positive
            && self.unit
            && self.not_in_square_class
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop65Instance {
    pub n: i64,
    pub field: BiquadField,
    pub mu: BiquadElem,
    pub rel_norms: [QuadElem; 3],
    pub checks: Prop65Checks,
}

fn radicands(n: i64) -> Result<[i128; 3]> {
    let n = n as i128;
    let ds = [n * (n + 1), 3 * n * (3 * n + 4), (3 * n + 3) * (3 * n + 4)];
    for (k, d) in ds.iter().enumerate() {
        if !squarefree_part(&BigInt::from(*d))?.r.is_one() {
            return Err(Error::NotSquareFree {
                name: format!("d{}", k + 1),
                value: BigInt::from(*d),
            });
        }
    }
    Ok(ds)
}

/// Builds `mu = (3n+4)/2 + 3/2 sqrt(d1) + 1/2 sqrt(d2) + 1/2 sqrt(d3)` in
/// `Q(sqrt(n(n+1)), sqrt(3n(3n+4)))` and verifies its defining properties.
pub fn prop65_family(n: i64) -> Result<Prop65Instance> {
    if n.rem_euclid(12) != 1 || n < 1 {
        return Err(Error::BadResidue(n));
    }
    let [d1, d2, d3] = radicands(n)?;
    let field = BiquadField::new(d1, d2)?;
    assert_eq!(field.d3(), d3, "squarefree part of d1*d2");
    let mu = field.elem([
        arith::rat(3 * n + 4, 2),
        arith::rat(3, 2),
        arith::rat(1, 2),
        arith::rat(1, 2),
    ]);
    let rel_norms: [QuadElem; 3] = [mu.rel_norm(1)?, mu.rel_norm(2)?, mu.rel_norm(3)?];
    let k2 = field.subfield(2);
    let k3 = field.subfield(3);
    let rel_norm_1 = rel_norms[0] == field.subfield(1).one();
    let rel_norm_2 = rel_norms[1] == k2.elem(arith::rat(3 * n + 2, 2), arith::rat(1, 2));
    let rel_norm_3 = rel_norms[2] == k3.elem(arith::int(6 * n + 7), arith::int(2));
    let totally_positive = mu.is_totally_positive();
    let unit = mu.is_unit();
    let not_in_square_class = if totally_positive && unit {
        !cor63_test(&mu)?.in_q_square_class
    } else {
        false
    };
    Ok(Prop65Instance {
        n,
        field,
        mu,
        rel_norms,
        checks: Prop65Checks {
            rel_norm_1,
            rel_norm_2,
            rel_norm_3,
            totally_positive,
            unit,
            not_in_square_class,
        },
    })
}

/// The first `count` values `n = 1 mod 12` whose three radicands are squarefree.
pub fn prop65_admissible(count: usize) -> Vec<i64> {
    (0..)
        .map(|k| 12 * k + 1)
        .filter(|&n| radicands(n).is_ok())
        .take(count)
        .collect()
}
