//! Certificates for families of totally positive units lying in pairwise
//! distinct square classes, and the greedy selection that produces them.
//!
//! For biquadratic units `alpha_l`, `alpha_k` with `Norm_{K_l/K_l'}(alpha_l)`
//! not a square in `K_l' K_k`, the product `alpha_l alpha_k` is not in
//! `(K_l K_k)^2 Q^x`: its norm to `K_l' K_k` equals
//! `Norm(alpha_l) * alpha_k^2`. Since every further square root adjoined in a
//! multiquadratic field is a rational one, Kummer theory lifts this to any
//! multiquadratic field containing `K_l K_k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::families::{example53_family, same_class};
use super::{is_square_in, MultiquadDescriptor};
use crate::biquad::{prop65_admissible, prop65_family, BiquadElem};
use crate::field::FieldElement;
use crate::multiquad::MultiquadField;
use crate::quad::{parse_rational, quad_sqrt, QuadElem};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum CertElem {
    Biquad(BiquadElem),
    Quad(QuadElem),
}

impl CertElem {
    pub fn field_name(&self) -> String {
        match self {
            Self::Biquad(e) => e.field().to_string(),
            Self::Quad(e) => e.field().to_string(),
        }
    }

    pub fn is_totally_positive_unit(&self) -> bool {
        match self {
            Self::Biquad(e) => e.is_unit() && e.is_totally_positive(),
            Self::Quad(e) => e.is_unit() && e.is_totally_positive(),
        }
    }

    fn as_biquad(&self) -> std::result::Result<&BiquadElem, String> {
        match self {
            Self::Biquad(e) => Ok(e),
            Self::Quad(e) => Err(format!("{e} is not a biquadratic element")),
        }
    }

    fn as_quad(&self) -> std::result::Result<&QuadElem, String> {
        match self {
            Self::Quad(e) => Ok(e),
            Self::Biquad(e) => Err(format!("{e} is not a quadratic element")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertUnit {
    pub field: String,
    pub elem: CertElem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    RelnormNonsquare,
    Kummer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub pair: [usize; 2],
    pub kind: WitnessKind,
    pub data: serde_json::Value,
}

/// `Norm_{K/K_i}(alpha)` is not a square in `K_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelnormData {
    pub subfield: usize,
    pub norm: QuadElem,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum KummerData {
    /// `norm = Norm_{K_l/K_l'}(alpha_l)` times any element of `<adjoined>`
    /// is a non-square in `K_l'`, so `norm` is not a square in
    /// `K_l'(sqrt(adjoined))`.
    Relative {
        subfield: usize,
        norm: QuadElem,
        adjoined: [i128; 2],
    },
    /// Each unit shares its square class with a rational, and the product
    /// of those rationals is a non-square in `Q(sqrt(generators))`.
    Rational {
        classes: Vec<String>,
        generators: Vec<i128>,
    },
}

// Untagged enums buffer their input in a form without 128-bit integers, so
// the variant is picked by key instead.
fn by_key<'de, D, A, B, T>(
    d: D,
    key: &str,
    first: impl FnOnce(A) -> T,
    second: impl FnOnce(B) -> T,
) -> std::result::Result<T, D::Error>
where
    D: serde::Deserializer<'de>,
    A: serde::de::DeserializeOwned,
    B: serde::de::DeserializeOwned,
{
    use serde::de::Error as _;
    let v = serde_json::Value::deserialize(d)?;
    if v.get(key).is_some() {
        A::deserialize(v).map(first).map_err(D::Error::custom)
    } else {
        B::deserialize(v).map(second).map_err(D::Error::custom)
    }
}

impl<'de> Deserialize<'de> for CertElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        by_key(d, "d1", Self::Biquad, Self::Quad)
    }
}

#[derive(Deserialize)]
struct RelativeRepr {
    subfield: usize,
    norm: QuadElem,
    adjoined: [i128; 2],
}

#[derive(Deserialize)]
struct RationalRepr {
    classes: Vec<String>,
    generators: Vec<i128>,
}

impl<'de> Deserialize<'de> for KummerData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        by_key(
            d,
            "subfield",
            |r: RelativeRepr| Self::Relative {
                subfield: r.subfield,
                norm: r.norm,
                adjoined: r.adjoined,
            },
            |r: RationalRepr| Self::Rational {
                classes: r.classes,
                generators: r.generators,
            },
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassCertificate {
    pub ambient: MultiquadDescriptor,
    pub claim: String,
    pub units: Vec<CertUnit>,
    pub witnesses: Vec<Witness>,
}

impl ClassCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub units: usize,
    pub witnesses: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCandidate {
    pub alpha: BiquadElem,
    /// Index `i'` of a quadratic subfield with non-square relative norm.
    pub subfield: usize,
}

/// Generator mask of `sqrt(d_i)` of the first biquadratic factor and the
/// automorphism fixing it, inside `Q(sqrt d1, sqrt d2, sqrt d1', sqrt d2')`.
fn subfield_masks(i: usize) -> (usize, usize) {
    match i {
        1 => (0b01, 0b10),
        2 => (0b10, 0b01),
        _ => (0b11, 0b11),
    }
}

/// Checks that `Norm_{K_l/K_l'}(alpha_l)` stays a non-square in `K_l' K_k`
/// and that the norm identity holds; returns the relative norm.
fn check_relative(
    alpha_l: &BiquadElem,
    subfield: usize,
    alpha_k: &BiquadElem,
) -> std::result::Result<QuadElem, String> {
    if !(1..=3).contains(&subfield) {
        return Err(format!("subfield index {subfield} out of range"));
    }
    let (fl, fk) = (alpha_l.field(), alpha_k.field());
    let norm = alpha_l.rel_norm(subfield).map_err(|e| e.to_string())?;
    let gens = [fl.d1(), fl.d2(), fk.d1(), fk.d2()];
    let big = MultiquadField::new(gens.iter().map(|&g| BigInt::from(g)).collect())
        .map_err(|_| format!("{fl} and {fk} are not linearly disjoint"))?;
    let (b, c) = (BigRational::from_integer(gens[2].into()), BigRational::from_integer(gens[3].into()));
    let one = BigRational::from_integer(1.into());
    for factor in [one, b.clone(), c.clone(), b * c] {
        if quad_sqrt(&norm.scale(&factor)).is_some() {
            return Err(format!("{norm} times {factor} is a square in {}", norm.field()));
        }
    }
    let (mask, negate) = subfield_masks(subfield);
    let r = if subfield == 3 { BigInt::from(fl.g().0) } else { BigInt::from(1) };
    let l = big.embed_biquad(alpha_l, 0, 1).map_err(|e| e.to_string())?;
    let k = big.embed_biquad(alpha_k, 2, 3).map_err(|e| e.to_string())?;
    let lhs = (&l * &k).norm_to_fixed_field(negate);
    let rhs = &big.embed_quad(&norm, mask, &r) * &(&k * &k);
    if lhs != rhs {
        return Err("norm identity fails".into());
    }
    Ok(norm)
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidCertificate(msg.into())
}

fn verify_witness(cert: &ClassCertificate, w: &Witness) -> Result<()> {
    let [i, j] = w.pair;
    let unit = |k: usize| {
        cert.units
            .get(k)
            .map(|u| &u.elem)
            .ok_or_else(|| invalid(format!("witness refers to missing unit {k}")))
    };
    let (ui, uj) = (unit(i)?, unit(j)?);
    match w.kind {
        WitnessKind::RelnormNonsquare => {
            let data: RelnormData = serde_json::from_value(w.data.clone())
                .map_err(|e| invalid(format!("pair {i},{j}: {e}")))?;
            let a = ui.as_biquad().map_err(invalid)?;
            if i != j {
                return Err(invalid("relative-norm witness must concern a single unit"));
            }
            if !(1..=3).contains(&data.subfield) || a.rel_norm(data.subfield)? != data.norm {
                return Err(invalid(format!("unit {i}: relative norm mismatch")));
            }
            if quad_sqrt(&data.norm).is_some() {
                return Err(invalid(format!("unit {i}: relative norm is a square")));
            }
        }
        WitnessKind::Kummer => {
            let data: KummerData = serde_json::from_value(w.data.clone())
                .map_err(|e| invalid(format!("pair {i},{j}: {e}")))?;
            match data {
                KummerData::Relative {
                    subfield,
                    norm,
                    adjoined,
                } => {
                    let (a, b) = (ui.as_biquad().map_err(invalid)?, uj.as_biquad().map_err(invalid)?);
                    if i >= j || adjoined != [b.field().d1(), b.field().d2()] {
                        return Err(invalid(format!("pair {i},{j}: inconsistent generators")));
                    }
                    let recomputed = check_relative(a, subfield, b)
                        .map_err(|e| invalid(format!("pair {i},{j}: {e}")))?;
                    if recomputed != norm {
                        return Err(invalid(format!("pair {i},{j}: relative norm mismatch")));
                    }
                }
                KummerData::Rational {
                    classes,
                    generators,
                } => {
                    if cert.ambient != MultiquadDescriptor::Explicit(generators.clone()) {
                        return Err(invalid("generators differ from the ambient field"));
                    }
                    let members: Vec<usize> = if i == j { vec![i] } else { vec![i, j] };
                    if classes.len() != members.len() {
                        return Err(invalid(format!("pair {i},{j}: wrong number of classes")));
                    }
                    let mut product = BigRational::from_integer(1.into());
                    for (&k, c) in members.iter().zip(&classes) {
                        let e = unit(k)?.as_quad().map_err(invalid)?;
                        let c = parse_rational(c)?;
                        let d = BigRational::from_integer(e.field().d().into());
                        if !is_square_in(&d, &cert.ambient)? {
                            return Err(invalid(format!("unit {k} lies outside the ambient field")));
                        }
                        if !same_class(e, &c) {
                            return Err(invalid(format!("unit {k} is not in the class of {c}")));
                        }
                        product *= c;
                    }
                    if is_square_in(&product, &cert.ambient)? {
                        return Err(invalid(format!("pair {i},{j}: class product is a square")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Re-verifies every unit and witness of a certificate with exact arithmetic.
pub fn verify_certificate(cert: &ClassCertificate) -> Result<CertificateCheck> {
    let m = cert.units.len();
    for (k, u) in cert.units.iter().enumerate() {
        if u.field != u.elem.field_name() {
            return Err(invalid(format!("unit {k}: field {} does not match element", u.field)));
        }
        if !u.elem.is_totally_positive_unit() {
            return Err(invalid(format!("unit {k} is not a totally positive unit")));
        }
    }
    for i in 0..m {
        for j in i..m {
            if !cert.witnesses.iter().any(|w| w.pair == [i, j]) {
                return Err(invalid(format!("no witness for pair {i},{j}")));
            }
        }
    }
    cert.witnesses
        .par_iter()
        .map(|w| verify_witness(cert, w))
        .collect::<Result<Vec<()>>>()?;
    Ok(CertificateCheck {
        units: m,
        witnesses: cert.witnesses.len(),
    })
}

/// Parses and verifies a serialized certificate without any other input.
pub fn verify_certificate_json(json: &str) -> Result<CertificateCheck> {
    let cert: ClassCertificate =
        serde_json::from_str(json).map_err(|e| invalid(format!("malformed JSON: {e}")))?;
    verify_certificate(&cert)
}

fn validate(c: &FamilyCandidate) -> Result<()> {
    if !(c.alpha.is_unit() && c.alpha.is_totally_positive()) {
        return Err(Error::NotTotallyPositiveUnit(c.alpha.to_string()));
    }
    if !(1..=3).contains(&c.subfield) {
        return Err(Error::InvalidField(format!("subfield index {}", c.subfield)));
    }
    if quad_sqrt(&c.alpha.rel_norm(c.subfield)?).is_some() {
        return Err(Error::SquareRelativeNorm {
            elem: c.alpha.to_string(),
            subfield: c.subfield,
        });
    }
    Ok(())
}

/// Selects `m` candidates in order such that each earlier selection keeps a
/// non-square relative norm over every later field, and certifies them.
pub fn greedy_disjoint_select(families: &[FamilyCandidate], m: usize) -> Result<ClassCertificate> {
    for c in families {
        validate(c)?;
    }
    let mut chosen: Vec<&FamilyCandidate> = Vec::with_capacity(m);
    for cand in families {
        if chosen.len() == m {
            break;
        }
        let fits = chosen
            .iter()
            .all(|prev| check_relative(&prev.alpha, prev.subfield, &cand.alpha).is_ok());
        if fits {
            chosen.push(cand);
        }
    }
    if chosen.len() < m {
        return Err(Error::InsufficientFamilies {
            found: chosen.len(),
            wanted: m,
        });
    }
    let units = chosen
        .iter()
        .map(|c| CertUnit {
            field: c.alpha.field().to_string(),
            elem: CertElem::Biquad(c.alpha.clone()),
        })
        .collect();
    let mut witnesses = Vec::new();
    for (l, a) in chosen.iter().enumerate() {
        let norm = a.alpha.rel_norm(a.subfield)?;
        witnesses.push(Witness {
            pair: [l, l],
            kind: WitnessKind::RelnormNonsquare,
            data: serde_json::to_value(RelnormData {
                subfield: a.subfield,
                norm: norm.clone(),
            })
            .expect("serializable"),
        });
        for (k, b) in chosen.iter().enumerate().skip(l + 1) {
            let f = b.alpha.field();
            witnesses.push(Witness {
                pair: [l, k],
                kind: WitnessKind::Kummer,
                data: serde_json::to_value(KummerData::Relative {
                    subfield: a.subfield,
                    norm: norm.clone(),
                    adjoined: [f.d1(), f.d2()],
                })
                .expect("serializable"),
            });
        }
    }
    Ok(ClassCertificate {
        ambient: MultiquadDescriptor::AllSquareFree,
        claim: format!(
            "{m} totally positive units whose pairwise products are non-squares in every multiquadratic field containing them"
        ),
        units,
        witnesses,
    })
}

/// `m` distinct square classes of totally positive units in the compositum
/// of all real quadratic fields, drawn from the biquadratic family with
/// `n = 1 mod 12`.
pub fn theorem72_certificate(m: usize) -> Result<ClassCertificate> {
    let mut pool = 4 * m + 8;
    loop {
        let mut candidates = Vec::with_capacity(pool);
        for n in prop65_admissible(pool) {
            let inst = prop65_family(n)?;
            if inst.checks.all() {
                candidates.push(FamilyCandidate {
                    alpha: inst.mu,
                    subfield: 2,
                });
            }
        }
        match greedy_disjoint_select(&candidates, m) {
            Err(Error::InsufficientFamilies { .. }) if pool < 64 * m + 64 => pool *= 2,
            other => return other,
        }
    }
}

/// Certificate for the units `2n_k + sqrt(4n_k^2 - 1)` in the compositum of
/// their quadratic fields.
pub fn example53_certificate(m: usize) -> Result<ClassCertificate> {
    let fam = example53_family(m)?;
    let generators = fam.generators();
    let units = fam
        .members
        .iter()
        .map(|mem| CertUnit {
            field: mem.field.to_string(),
            elem: CertElem::Quad(mem.eps.clone()),
        })
        .collect();
    let mut witnesses = Vec::new();
    for (i, a) in fam.members.iter().enumerate() {
        for (j, b) in fam.members.iter().enumerate().skip(i) {
            let classes = if i == j {
                vec![a.class.to_string()]
            } else {
                vec![a.class.to_string(), b.class.to_string()]
            };
            witnesses.push(Witness {
                pair: [i, j],
                kind: WitnessKind::Kummer,
                data: serde_json::to_value(KummerData::Rational {
                    classes,
                    generators: generators.clone(),
                })
                .expect("serializable"),
            });
        }
    }
    Ok(ClassCertificate {
        ambient: MultiquadDescriptor::Explicit(generators),
        claim: format!("{m} totally positive units in pairwise distinct non-trivial square classes"),
        units,
        witnesses,
    })
}
