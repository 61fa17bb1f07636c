//! Representation search for diagonal lattices, the rank lower bound run and
//! the `2^n` diagonal lattice built from subset products of units.
//!
//! For a diagonal form `sum a_i x_i^2` with totally positive `a_i`, every
//! solution of `Q(x) = beta` satisfies `sigma(a_i) sigma(x_i)^2 <= sigma(beta)`
//! for each real embedding `sigma`, so the candidate coordinates lie in an
//! explicit box.

use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::GramLattice;
use crate::field::{sqrt_upper, FieldElement, NumberField};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchLimit {
    /// Search the whole box; absence proves non-representation.
    Exhaustive,
    /// Give up with [`Error::BudgetExceeded`] after this many search nodes.
    Budget(usize),
}

/// Upper bound for `sqrt(sigma_j(beta) / sigma_j(a))` for every embedding.
fn coordinate_bounds<E: FieldElement>(a: &E, beta: &E) -> Option<Vec<(BigRational, BigRational)>> {
    let (ac, bc) = (a.conjugates(), beta.conjugates());
    let mut out = Vec::with_capacity(ac.len());
    for (x, y) in ac.iter().zip(&bc) {
        let mut bits = 64;
        let lo_a = loop {
            let iv = x.enclosure(bits);
            if iv.lo.is_positive() {
                break iv.lo;
            }
            bits *= 2;
        };
        let hi_b = y.enclosure(64).hi;
        if hi_b.is_negative() {
            return None;
        }
        let r = sqrt_upper(&(hi_b / lo_a));
        out.push((-r.clone(), r));
    }
    Some(out)
}

struct Search<'a, E: FieldElement> {
    diag: &'a [E],
    /// Per coordinate: candidates `x >= 0` with their values `a_i x^2`.
    cands: Vec<Vec<(E, E)>>,
    nodes: AtomicUsize,
    budget: Option<usize>,
}

impl<E: FieldElement> Search<'_, E> {
    fn tick(&self, what: &E) -> Result<()> {
        let n = self.nodes.fetch_add(1, AtomicOrdering::Relaxed);
        match self.budget {
            Some(b) if n >= b => Err(Error::BudgetExceeded(what.to_string())),
            _ => Ok(()),
        }
    }

    fn go(&self, i: usize, rest: E, path: &mut Vec<E>) -> Result<Option<Vec<E>>> {
        self.tick(&rest)?;
        let n = self.diag.len();
        if i + 1 == n {
            let q = rest * self.diag[i].inverse().expect("positive entry");
            let Some(s) = q.sqrt() else { return Ok(None) };
            if !s.is_integral() {
                return Ok(None);
            }
            let mut v = path.clone();
            v.push(s.abs());
            return Ok(Some(v));
        }
        for (x, val) in &self.cands[i] {
            let r = rest.clone() - val.clone();
            if !r.is_totally_nonnegative() {
                continue;
            }
            path.push(x.clone());
            let found = self.go(i + 1, r, path)?;
            path.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

impl<F: NumberField> GramLattice<F> {
    /// A vector `x` with `Q(x) = beta`, searched in the box forced by
    /// positive definiteness of a diagonal form. `Ok(None)` is only returned
    /// after the whole box has been searched.
    pub fn represent(&self, beta: &F::Elem, limit: SearchLimit) -> Result<Option<Vec<F::Elem>>> {
        let diag = self.diagonal_entries().ok_or(Error::NonDiagonal)?;
        if let Some(a) = diag.iter().find(|a| !a.is_totally_positive()) {
            return Err(Error::NotPositiveDefinite(format!("diagonal entry {a}")));
        }
        if beta.is_zero() {
            return Ok(Some(vec![self.base().zero(); diag.len()]));
        }
        if diag.is_empty() || !beta.is_totally_positive() {
            return Ok(None);
        }
        let mut cands = Vec::with_capacity(diag.len());
        for a in &diag[..diag.len() - 1] {
            let Some(bounds) = coordinate_bounds(a, beta) else {
                return Ok(None);
            };
            let mut list: Vec<(F::Elem, F::Elem)> = self
                .base()
                .integers_in_box(&bounds)
                .into_iter()
                .filter(|x| x.signum() != std::cmp::Ordering::Less)
                .map(|x| {
                    let v = a.clone() * x.clone() * x.clone();
                    (x, v)
                })
                .filter(|(_, v)| (beta.clone() - v.clone()).is_totally_nonnegative())
                .collect();
            list.sort_by(|p, q| p.1.cmp_value(&q.1));
            cands.push(list);
        }
        let search = Search {
            diag: &diag,
            cands,
            nodes: AtomicUsize::new(0),
            budget: match limit {
                SearchLimit::Exhaustive => None,
                SearchLimit::Budget(b) => Some(b),
            },
        };
        if diag.len() == 1 {
            return search.go(0, beta.clone(), &mut Vec::new());
        }
        let found = search.cands[0].par_iter().find_map_first(|(x, val)| {
            let r = beta.clone() - val.clone();
            if !r.is_totally_nonnegative() {
                return None;
            }
            let mut path = vec![x.clone()];
            search.go(1, r, &mut path).transpose()
        });
        found.transpose()
    }
}

/// `prod_{j in I} e_j` for every subset `I`, indexed by bit mask.
pub fn subset_products<F: NumberField>(base: &F, e: &[F::Elem]) -> Vec<F::Elem> {
    (0usize..1 << e.len())
        .map(|mask| {
            e.iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .fold(base.one(), |acc, (_, x)| acc * x.clone())
        })
        .collect()
}

/// The diagonal lattice with entries `prod_{j in I} e_j` over all subsets.
pub fn diagonal_universal_2n<F: NumberField>(base: F, e: &[F::Elem]) -> Result<GramLattice<F>> {
    for x in e {
        if !(x.is_unit() && x.is_totally_positive()) {
            return Err(Error::NotTotallyPositiveUnit(x.to_string()));
        }
    }
    let entries = subset_products(&base, e);
    Ok(GramLattice::diagonal(base, entries))
}

/// Whether the totally positive integer `e` is not a sum of two nonzero
/// totally positive integers, by exhaustive search below `e`.
pub fn is_indecomposable<E: FieldElement>(e: &E) -> bool {
    let f = e.field();
    let bounds: Vec<(BigRational, BigRational)> = e
        .conjugates()
        .iter()
        .map(|c| (BigRational::zero(), c.enclosure(64).hi))
        .collect();
    !f.integers_in_box(&bounds)
        .into_iter()
        .any(|a| !a.is_zero() && a.is_totally_positive() && (e.clone() - a).is_totally_positive())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RankBoundOutcome {
    /// Every unit was represented in the current complement and split off.
    SplitsCompleted {
        splits: usize,
        /// Split vectors in the coordinates of the input lattice.
        vectors: Vec<Vec<String>>,
    },
    /// Exhaustive search found no representation of `unit` anywhere in the
    /// lattice, so the lattice is not universal.
    RepresentationNotFound { index: usize, unit: String },
    /// `unit` is represented only through earlier split vectors, which for an
    /// indecomposable unit means it shares a square class with an earlier one.
    RepresentedByEarlierVectors { index: usize, unit: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankBoundRun {
    pub outcome: RankBoundOutcome,
    /// The units lie in pairwise distinct square classes of the base field.
    pub distinct_classes: bool,
    /// Every unit passed the exhaustive indecomposability check.
    pub units_indecomposable: bool,
}

impl RankBoundRun {
    /// Whether the run establishes that a universal lattice containing these
    /// representations needs rank at least the number of units.
    pub fn bound_certified(&self) -> bool {
        matches!(self.outcome, RankBoundOutcome::SplitsCompleted { .. })
            && self.distinct_classes
            && self.units_indecomposable
    }
}

/// Represents each unit in turn inside the orthogonal complement of the
/// previously split vectors and splits it off.
pub fn rank_lower_bound_run<F: NumberField>(
    lattice: &GramLattice<F>,
    units: &[F::Elem],
    limit: SearchLimit,
) -> Result<RankBoundRun> {
    if !lattice.is_classical() {
        return Err(Error::NotClassical);
    }
    if !lattice.is_positive_definite() {
        return Err(Error::NotPositiveDefinite(lattice.to_string()));
    }
    for u in units {
        if !(u.is_unit() && u.is_totally_positive()) {
            return Err(Error::NotTotallyPositiveUnit(u.to_string()));
        }
    }
    let distinct_classes = units.iter().enumerate().all(|(i, a)| {
        units[i + 1..]
            .iter()
            .all(|b| (a.clone() * b.clone()).sqrt().is_none())
    });
    let units_indecomposable = units.iter().all(is_indecomposable);

    let base = lattice.base().clone();
    let n = lattice.rank();
    let mut current = lattice.clone();
    // rows: basis of `current` in original coordinates
    let mut basis: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| {
            let mut e = vec![base.zero(); n];
            e[i] = base.one();
            e
        })
        .collect();
    let to_original = |coeffs: &[F::Elem], basis: &[Vec<F::Elem>]| -> Vec<F::Elem> {
        (0..n)
            .map(|c| {
                coeffs
                    .iter()
                    .zip(basis)
                    .fold(base.zero(), |acc, (x, row)| acc + x.clone() * row[c].clone())
            })
            .collect()
    };
    let mut vectors = Vec::with_capacity(units.len());
    for (k, eps) in units.iter().enumerate() {
        match current.represent(eps, limit)? {
            Some(v) => {
                let split = current.split_unit(&v)?;
                let original = to_original(&v, &basis);
                debug_assert_eq!(lattice.evaluate(&original)?, eps.clone());
                vectors.push(original.iter().map(|x| x.to_string()).collect());
                basis = split
                    .complement_basis
                    .iter()
                    .map(|w| to_original(w, &basis))
                    .collect();
                current = split.complement;
            }
            None => {
                let outcome = if lattice.represent(eps, limit)?.is_some() {
                    RankBoundOutcome::RepresentedByEarlierVectors {
                        index: k,
                        unit: eps.to_string(),
                    }
                } else {
                    RankBoundOutcome::RepresentationNotFound {
                        index: k,
                        unit: eps.to_string(),
                    }
                };
                return Ok(RankBoundRun {
                    outcome,
                    distinct_classes,
                    units_indecomposable,
                });
            }
        }
    }
    Ok(RankBoundRun {
        outcome: RankBoundOutcome::SplitsCompleted {
            splits: units.len(),
            vectors,
        },
        distinct_classes,
        units_indecomposable,
    })
}
