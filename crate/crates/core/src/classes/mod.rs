//! Square classes in multiquadratic composita.
//!
//! A rational `d` is a square in `Q(sqrt(g) : g in S)` iff `d = (prod S0) e^2`
//! for a finite `S0` in `S`, which is a GF(2) span question on square-class
//! vectors.

mod certificate;
mod families;

pub use certificate::{
    example53_certificate, greedy_disjoint_select, theorem72_certificate, verify_certificate, verify_certificate_json,
    CertElem, CertUnit, CertificateCheck, ClassCertificate, FamilyCandidate, KummerData,
    RelnormData, Witness, WitnessKind,
};
pub use families::{
    example53_family, example54_family, primes_3_mod_4, Example53Family, Example53Member,
    Example54Family, Example54Member,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gf2_express, SquareClassVector};
use crate::biquad::prop65_admissible;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedFamily {
    /// `Q(sqrt(4 n_k^2 - 1))` for the coprime sequence `n_k`.
    Example53,
    /// `Q(sqrt(q_{2i} q_{2i+1}))` over consecutive primes `3 mod 4`.
    Example54,
    /// The biquadratic fields `Q(sqrt(n(n+1)), sqrt(3n(3n+4)))`.
    Prop65,
}

/// A multiquadratic field given by generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MultiquadDescriptor {
    Explicit(Vec<i128>),
    Family { family: NamedFamily, prefix: usize },
    /// The compositum of all real quadratic fields.
    AllSquareFree,
}

impl MultiquadDescriptor {
    /// The materialized generators, or `None` for [`Self::AllSquareFree`].
    pub fn generators(&self) -> Result<Option<Vec<i128>>> {
        let gens = match self {
            Self::AllSquareFree => return Ok(None),
            Self::Explicit(g) => g.clone(),
            Self::Family { family, prefix } => match family {
                NamedFamily::Example53 => example53_family(*prefix)?
                    .members
                    .iter()
                    .map(|m| m.field.d())
                    .collect(),
                NamedFamily::Example54 => primes_3_mod_4(2 * prefix)
                    .chunks(2)
                    .map(|p| p[0] * p[1])
                    .collect(),
                NamedFamily::Prop65 => prop65_admissible(*prefix)
                    .into_iter()
                    .flat_map(|n| {
                        let n = n as i128;
                        [n * (n + 1), 3 * n * (3 * n + 4)]
                    })
                    .collect(),
            },
        };
        Ok(Some(gens))
    }
}

/// Whether the nonzero rational `d` is a square in the field.
pub fn is_square_in(d: &BigRational, field: &MultiquadDescriptor) -> Result<bool> {
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let Some(gens) = field.generators()? else {
        return Ok(d.is_positive());
    };
    let target = SquareClassVector::of_rational(d)?;
    let basis = gens
        .iter()
        .map(|g| SquareClassVector::of_integer(&BigInt::from(*g)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(gf2_express(&target, &basis).is_some())
}
