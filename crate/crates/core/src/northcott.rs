//! Houses, Weil heights, bounded-house enumeration and the descent iteration
//! for diagonal forms.
//!
//! For a diagonal form `sum a_i x_i^2` every solution of `Q(x) = beta`
//! satisfies `house(x_i) <= C house(beta)^{1/2}` with
//! `C = max_i max_sigma sigma(a_i)^{-1/2}`. Shifting each coordinate to
//! `x_i + floor(house(x_i)) + 1` gives totally positive integers of house
//! below `(2C + 1) house(beta)^{1/2}`, so iterating drives every house below
//! `(2C + 1)^2`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::arith::{int, rational_sqrt};
use crate::field::{sqrt_upper, ExactReal, FieldElement, NumberField};
use crate::lattice::{GramLattice, SearchLimit};
use crate::quad::QuadField;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct HeightReport<E: FieldElement> {
    pub elem: E,
    pub house: ExactReal<E>,
    /// `[Q(e) : Q]`, the number of distinct conjugates.
    pub degree: usize,
    pub weil: f64,
    /// Certified bound on `|weil - h(e)|`.
    pub weil_error: f64,
    /// `prod max(1, |e_i|) <= house^degree`, decided exactly.
    pub bound_holds: bool,
}

impl<E: FieldElement> HeightReport<E> {
    pub fn log_house(&self) -> f64 {
        self.house.to_f64().ln()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "elem": self.elem.to_string(),
            "house": self.house.elem().to_string(),
            "house_approx": self.house.to_f64(),
            "degree": self.degree,
            "weil": self.weil,
            "weil_error": self.weil_error,
            "log_house": self.log_house(),
            "bound_holds": self.bound_holds,
        })
    }
}

/// Enclosure of `log max(1, |x|)`.
fn log_max_one(x: &BigRational, y: &BigRational) -> (f64, f64) {
    let lo = x.to_f64().unwrap_or(f64::INFINITY).max(1.0).ln();
    let hi = y.to_f64().unwrap_or(f64::INFINITY).max(1.0).ln();
    (lo, hi)
}

/// Weil height of a nonzero algebraic integer, averaged over the conjugates
/// inside the field it generates.
pub fn weil_height<E: FieldElement>(e: &E) -> Result<HeightReport<E>> {
    if !e.is_integral() {
        return Err(Error::NotIntegral(e.to_string()));
    }
    if e.is_zero() {
        return Err(Error::NotIntegral("0 has no height".into()));
    }
    let mut distinct: Vec<E> = Vec::new();
    for c in e.conjugates() {
        if !distinct.contains(&c) {
            distinct.push(c);
        }
    }
    let degree = distinct.len();
    let (mut sum, mut err) = (0.0f64, 0.0f64);
    for c in &distinct {
        let iv = c.enclosure(128).abs();
        let (lo, hi) = log_max_one(&iv.lo, &iv.hi);
        sum += (lo + hi) / 2.0;
        err += (hi - lo) / 2.0 + 4.0 * f64::EPSILON * hi.abs().max(1.0);
    }
    let weil = sum / degree as f64;
    let house = e.house();
    let f = e.field();
    let big = distinct
        .iter()
        .map(|c| c.abs())
        .filter(|a| a.cmp_value(&f.one()) == Ordering::Greater)
        .fold(f.one(), |acc, a| acc * a);
    let bound = (0..degree).fold(f.one(), |acc, _| acc * house.elem().clone());
    Ok(HeightReport {
        elem: e.clone(),
        house,
        degree,
        weil,
        weil_error: err / degree as f64,
        bound_holds: big.cmp_value(&bound) != Ordering::Greater,
    })
}

fn sort_by_house<E: FieldElement>(v: Vec<E>) -> Vec<E> {
    let mut keyed: Vec<(ExactReal<E>, String, E)> = v
        .into_iter()
        .map(|e| (e.house(), e.to_string(), e))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp_exact(&b.0).then_with(|| a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, _, e)| e).collect()
}

/// Every totally positive integer of the field with house `< r`, ordered by
/// house.
pub fn enumerate_tp_integers<F: NumberField>(field: &F, r: &BigRational) -> Vec<F::Elem> {
    if !r.is_positive() {
        return Vec::new();
    }
    let bounds = vec![(BigRational::from_integer(0.into()), r.clone()); field.degree()];
    let found = field
        .integers_in_box(&bounds)
        .into_iter()
        .filter(|x| x.is_integral() && x.is_totally_positive() && x.house().cmp_rational(r) == Ordering::Less)
        .collect();
    sort_by_house(found)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub field: String,
    pub d: i128,
    pub count: usize,
    pub cumulative: usize,
}

/// Counts of totally positive integers with house `< r` in each quadratic
/// field. Only quadratic layers are enumerated, so for a compositum these
/// counts are lower bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NorthcottProfile {
    pub r: String,
    pub label: &'static str,
    pub rows: Vec<ProfileRow>,
    pub total: usize,
}

impl NorthcottProfile {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn northcott_profile(fields: &[QuadField], r: &BigRational) -> NorthcottProfile {
    let counts: Vec<usize> = fields
        .par_iter()
        .map(|f| enumerate_tp_integers(f, r).len())
        .collect();
    let mut cumulative = 0;
    let rows = fields
        .iter()
        .zip(counts)
        .map(|(f, count)| {
            cumulative += count;
            ProfileRow {
                field: f.to_string(),
                d: f.d(),
                count,
                cumulative,
            }
        })
        .collect();
    NorthcottProfile {
        r: r.to_string(),
        label: "quadratic-layer lower bound",
        rows,
        total: cumulative,
    }
}

/// `C = m^{-1/2}` for the smallest conjugate `m` of a diagonal entry, and the
/// termination threshold `(2C + 1)^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentBound<E> {
    pub min_conjugate: E,
    /// `C` when it is rational.
    pub c_rational: Option<BigRational>,
    /// The threshold when `C` is rational, otherwise a certified lower bound.
    pub threshold: BigRational,
}

impl<E: FieldElement> DescentBound<E> {
    pub fn for_lattice<F: NumberField<Elem = E>>(lattice: &GramLattice<F>) -> Result<Self> {
        let diag = lattice.diagonal_entries().ok_or(Error::NonDiagonal)?;
        let mut min: Option<E> = None;
        for a in &diag {
            if !a.is_totally_positive() {
                return Err(Error::NotPositiveDefinite(format!("diagonal entry {a}")));
            }
            for c in a.conjugates() {
                if min.as_ref().is_none_or(|m| c.cmp_value(m) == Ordering::Less) {
                    min = Some(c);
                }
            }
        }
        let m = min.ok_or(Error::NotPositiveDefinite("rank 0".into()))?;
        let two = int(2);
        let c_rational = m.to_rational().and_then(|q| rational_sqrt(&q)).map(|s| s.recip());
        let threshold = match &c_rational {
            Some(c) => {
                let t = &two * c + BigRational::one();
                &t * &t
            }
            None => {
                // C >= 1 / sqrt(upper bound of m)
                let c_lo = sqrt_upper(&m.enclosure(64).hi).recip();
                let t = &two * c_lo + BigRational::one();
                &t * &t
            }
        };
        Ok(Self {
            min_conjugate: m,
            c_rational,
            threshold,
        })
    }

    pub fn describe_c(&self) -> String {
        match &self.c_rational {
            Some(c) => c.to_string(),
            None => format!("({})^(-1/2)", self.min_conjugate),
        }
    }

    /// `C` as a float.
    pub fn c_approx(&self) -> f64 {
        1.0 / self.min_conjugate.approx().sqrt()
    }
}

/// `x + floor(house(x)) + 1` for every coordinate.
pub fn descent_shift<E: FieldElement>(gamma: &[E]) -> Vec<E> {
    gamma
        .iter()
        .map(|x| {
            let k: BigInt = x.house().floor() + 1;
            x.clone() + x.field().from_rational(BigRational::from_integer(k))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentStep<E> {
    pub gamma: Vec<E>,
    pub shifted: Vec<E>,
}

/// Represents `beta` by the diagonal lattice and shifts the coordinates,
/// checking `house(beta_j) <= 2 house(gamma_j) + 1` for each of them. The
/// bound is attained whenever `house(gamma_j)` is an integer.
pub fn descent_step<F: NumberField>(lattice: &GramLattice<F>, beta: &F::Elem) -> Result<DescentStep<F::Elem>> {
    let gamma = lattice
        .represent(beta, SearchLimit::Exhaustive)?
        .ok_or_else(|| Error::RepresentationNotFound(beta.to_string()))?;
    let shifted = descent_shift(&gamma);
    let f = lattice.base();
    for (g, b) in gamma.iter().zip(&shifted) {
        if !b.is_totally_positive() {
            return Err(Error::NotTotallyPositive(b.to_string()));
        }
        let cap = g.house().into_elem().scale(&int(2)) + f.one();
        if b.house().elem().cmp_value(&cap) == Ordering::Greater {
            return Err(Error::InvalidCertificate(format!("house of {b} exceeds {cap}")));
        }
    }
    Ok(DescentStep { gamma, shifted })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentTrace<E: FieldElement> {
    pub bound: DescentBound<E>,
    /// `levels[0] = [alpha]`; each level is sorted by element string.
    pub levels: Vec<Vec<E>>,
    pub max_house: Vec<ExactReal<E>>,
    /// The last level lies below the threshold.
    pub terminated: bool,
}

impl<E: FieldElement> DescentTrace<E> {
    /// The largest house drops strictly from each level above the threshold
    /// to the next.
    pub fn decreasing_above_threshold(&self) -> bool {
        self.max_house.windows(2).all(|w| {
            w[0].cmp_rational(&self.bound.threshold) == Ordering::Less
                || w[1].cmp_exact(&w[0]) == Ordering::Less
        })
    }

    pub fn iterations(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn to_json(&self) -> serde_json::Value {
        let levels: Vec<Vec<String>> = self
            .levels
            .iter()
            .map(|l| l.iter().map(|x| x.to_string()).collect())
            .collect();
        let max: Vec<f64> = self.max_house.iter().map(|h| h.to_f64()).collect();
        json!({
            "levels": levels,
            "C": self.bound.describe_c(),
            "threshold": self.bound.threshold.to_string(),
            "max_house_per_level": max,
            "terminated": self.terminated,
        })
    }
}

fn max_house<E: FieldElement>(level: &[E]) -> ExactReal<E> {
    level
        .iter()
        .map(|x| x.house())
        .max_by(|a, b| a.cmp_exact(b))
        .expect("levels are nonempty")
}

/// Runs the descent for at most `max_iter` levels and returns the trace,
/// whether or not the threshold was reached.
pub fn descent_trace<F: NumberField>(
    lattice: &GramLattice<F>,
    alpha: &F::Elem,
    max_iter: usize,
) -> Result<DescentTrace<F::Elem>> {
    if !alpha.is_integral() {
        return Err(Error::NotIntegral(alpha.to_string()));
    }
    if !alpha.is_totally_positive() {
        return Err(Error::NotTotallyPositive(alpha.to_string()));
    }
    let bound = DescentBound::for_lattice(lattice)?;
    let mut levels = vec![vec![alpha.clone()]];
    let mut maxima = Vec::new();
    loop {
        let level = levels.last().expect("nonempty");
        let top = max_house(level);
        let below = top.cmp_rational(&bound.threshold) == Ordering::Less;
        maxima.push(top);
        if below || levels.len() > max_iter {
            return Ok(DescentTrace {
                bound,
                levels,
                max_house: maxima,
                terminated: below,
            });
        }
        let steps: Vec<Vec<F::Elem>> = level
            .par_iter()
            .map(|b| descent_step(lattice, b).map(|s| s.shifted))
            .collect::<Result<_>>()?;
        let next: BTreeMap<String, F::Elem> = steps
            .into_iter()
            .flatten()
            .map(|x| (x.to_string(), x))
            .collect();
        levels.push(next.into_values().collect());
    }
}

/// Like [`descent_trace`], but failing with [`Error::MaxIterExceeded`] when
/// the threshold is not reached.
pub fn descent_run<F: NumberField>(
    lattice: &GramLattice<F>,
    alpha: &F::Elem,
    max_iter: usize,
) -> Result<DescentTrace<F::Elem>> {
    let trace = descent_trace(lattice, alpha, max_iter)?;
    if trace.terminated {
        Ok(trace)
    } else {
        Err(Error::MaxIterExceeded(max_iter))
    }
}
