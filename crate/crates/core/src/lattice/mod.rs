//! Free quadratic lattices `O^n` with a symmetric Gram matrix over a totally
//! real base field.

mod search;

pub use search::{
    diagonal_universal_2n, is_indecomposable, rank_lower_bound_run, subset_products, RankBoundOutcome,
    RankBoundRun, SearchLimit,
};

use std::fmt;

use serde_json::json;

use crate::field::{FieldElement, NumberField};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramLattice<F: NumberField> {
    base: F,
    gram: Vec<Vec<F::Elem>>,
}

/// `L = O v ⟂ L'` for a vector `v` whose value is a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult<F: NumberField> {
    pub unit_vector: Vec<F::Elem>,
    /// Basis of the orthogonal complement, in the coordinates of the input.
    pub complement_basis: Vec<Vec<F::Elem>>,
    pub complement: GramLattice<F>,
}

impl<F: NumberField> GramLattice<F> {
    pub fn new(base: F, gram: Vec<Vec<F::Elem>>) -> Result<Self> {
        let n = gram.len();
        for row in &gram {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(Self { base, gram })
    }

    pub fn diagonal(base: F, entries: Vec<F::Elem>) -> Self {
        let n = entries.len();
        let gram = entries
            .into_iter()
            .enumerate()
            .map(|(i, a)| {
                let mut row = vec![base.zero(); n];
                row[i] = a;
                row
            })
            .collect();
        Self { base, gram }
    }

    pub fn identity(base: F, n: usize) -> Self {
        let ones = vec![base.one(); n];
        Self::diagonal(base, ones)
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<F::Elem>] {
        &self.gram
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rank()).all(|i| (0..self.rank()).all(|j| i == j || self.gram[i][j].is_zero()))
    }

    /// The diagonal entries when the Gram matrix is diagonal.
    pub fn diagonal_entries(&self) -> Option<Vec<F::Elem>> {
        self.is_diagonal()
            .then(|| (0..self.rank()).map(|i| self.gram[i][i].clone()).collect())
    }

    fn check_len(&self, v: &[F::Elem]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `B(v, w) = v^T G w`.
    pub fn bilinear(&self, v: &[F::Elem], w: &[F::Elem]) -> Result<F::Elem> {
        self.check_len(v)?;
        self.check_len(w)?;
        let mut acc = self.base.zero();
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, wj) in w.iter().enumerate() {
                if wj.is_zero() || self.gram[i][j].is_zero() {
                    continue;
                }
                acc = acc + vi.clone() * self.gram[i][j].clone() * wj.clone();
            }
        }
        Ok(acc)
    }

    /// `Q(v) = B(v, v)`.
    pub fn evaluate(&self, v: &[F::Elem]) -> Result<F::Elem> {
        self.bilinear(v, v)
    }

    /// Diagonal entries and doubled off-diagonal entries are integral.
    pub fn is_integral(&self) -> bool {
        let two = crate::arith::int(2);
        (0..self.rank()).all(|i| {
            (0..self.rank()).all(|j| {
                if i == j {
                    self.gram[i][i].is_integral()
                } else {
                    self.gram[i][j].scale(&two).is_integral()
                }
            })
        })
    }

    /// Every Gram entry is integral.
    pub fn is_classical(&self) -> bool {
        self.gram.iter().flatten().all(|x| x.is_integral())
    }

    /// Every leading principal minor is totally positive.
    pub fn is_positive_definite(&self) -> bool {
        (1..=self.rank()).all(|k| {
            let minor: Vec<Vec<F::Elem>> = self.gram[..k].iter().map(|r| r[..k].to_vec()).collect();
            determinant(&self.base, minor).is_totally_positive()
        })
    }

    pub fn determinant(&self) -> F::Elem {
        determinant(&self.base, self.gram.clone())
    }

    /// Splits off `v` with `Q(v)` a unit: the complement is spanned by
    /// `e_i - B(e_i, v) Q(v)^{-1} v` for the standard vectors `e_i` other
    /// than one at which `v` has a unit coordinate.
    pub fn split_unit(&self, v: &[F::Elem]) -> Result<SplitResult<F>> {
        if !self.is_classical() {
            return Err(Error::NotClassical);
        }
        let q = self.evaluate(v)?;
        if !q.is_unit() {
            return Err(Error::NotUnit(q.to_string()));
        }
        let pivot = v.iter().position(|c| c.is_unit()).ok_or_else(|| {
            Error::NoBasisCompletion(format!("{:?}", v.iter().map(|c| c.to_string()).collect::<Vec<_>>()))
        })?;
        let q_inv = q.inverse().expect("units are invertible");
        let n = self.rank();
        let mut complement_basis = Vec::with_capacity(n.saturating_sub(1));
        for i in (0..n).filter(|&i| i != pivot) {
            let mut e = vec![self.base.zero(); n];
            e[i] = self.base.one();
            let c = self.bilinear(&e, v)? * q_inv.clone();
            let w: Vec<F::Elem> = e
                .into_iter()
                .zip(v)
                .map(|(ei, vi)| ei - c.clone() * vi.clone())
                .collect();
            complement_basis.push(w);
        }
        let m = complement_basis.len();
        let mut gram = vec![vec![self.base.zero(); m]; m];
        for i in 0..m {
            for j in i..m {
                let b = self.bilinear(&complement_basis[i], &complement_basis[j])?;
                gram[i][j] = b.clone();
                gram[j][i] = b;
            }
        }
        for w in &complement_basis {
            debug_assert!(self.bilinear(w, v)?.is_zero());
        }
        Ok(SplitResult {
            unit_vector: v.to_vec(),
            complement_basis,
            complement: GramLattice {
                base: self.base.clone(),
                gram,
            },
        })
    }

    /// `{"base": "...", "gram": [["..."]]}` with entries in element syntax.
    pub fn to_json(&self) -> serde_json::Value {
        let gram: Vec<Vec<String>> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        json!({ "base": self.base.to_string(), "gram": gram })
    }
}

impl<F: NumberField> fmt::Display for GramLattice<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .gram
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}] over {}", rows.join(", "), self.base)
    }
}

/// Determinant by Gaussian elimination over the field.
pub fn determinant<F: NumberField>(base: &F, mut m: Vec<Vec<F::Elem>>) -> F::Elem {
    let n = m.len();
    let mut det = base.one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return base.zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let inv = m[col][col].inverse().expect("nonzero pivot");
        det = det * m[col][col].clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() * inv.clone();
            for c in col..n {
                let sub = factor.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - sub;
            }
        }
    }
    det
}
