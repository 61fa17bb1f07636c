//! Exact arithmetic in real quadratic and biquadratic fields, square classes
//! of totally positive units, quadratic Gram lattices over those fields, and
//! height/descent computations.
//!
//! Everything is exact: elements carry rational coordinates, signs of
//! algebraic numbers are decided by exact zero tests followed by dyadic
//! interval refinement, and every constructive claim is re-verified before it
//! is returned.

pub mod arith;
pub mod biquad;
pub mod classes;
pub mod expr;
pub mod field;
pub mod lattice;
pub mod multiquad;
pub mod northcott;
pub mod quad;

use num_bigint::BigInt;
use thiserror::Error;

pub use arith::ArithError;
pub use biquad::{BiquadElem, BiquadField};
pub use field::{ExactReal, FieldElement, NumberField, Rational, RationalField};
pub use quad::{QuadElem, QuadField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("elements belong to different fields: {0} and {1}")]
    FieldMismatch(String, String),
    #[error("fundamental unit of Q(sqrt({0})) has norm -1")]
    NormMinusOne(i128),
    #[error("{0} does not have norm 1")]
    NormNotOne(String),
    #[error("beta vanishes for e = -1")]
    DegenerateBeta,
    #[error("element {0} does not lie in the requested subfield")]
    CoercionFailure(String),
    #[error("no quadratic subfield of {0} is known to carry a totally positive non-square unit")]
    PreconditionUnverifiable(String),
    #[error("{0} is not congruent to 1 mod 12")]
    BadResidue(i64),
    #[error("{name} = {value} is not squarefree")]
    NotSquareFree { name: String, value: BigInt },
    #[error("bad prime {0}: need distinct primes congruent to 3 mod 4")]
    BadPrime(BigInt),
    #[error("relative norm of {elem} to subfield {subfield} is a square")]
    SquareRelativeNorm { elem: String, subfield: usize },
    #[error("only {found} admissible families, {wanted} requested")]
    InsufficientFamilies { found: usize, wanted: usize },
    #[error("value exceeds the supported radicand range: {0}")]
    Overflow(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no basis of the lattice contains {0}")]
    NoBasisCompletion(String),
    #[error("lattice is not classical")]
    NotClassical,
    #[error("{0} is not a unit of the base ring")]
    NotUnit(String),
    #[error("{0} is not a totally positive unit")]
    NotTotallyPositiveUnit(String),
    #[error("Gram matrix is not diagonal")]
    NonDiagonal,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("{0} is not positive definite")]
    NotPositiveDefinite(String),
    #[error("{0} is not totally positive")]
    NotTotallyPositive(String),
    #[error("{0} is not an algebraic integer")]
    NotIntegral(String),
    #[error("{0} is not represented by the lattice")]
    RepresentationNotFound(String),
    #[error("search budget exhausted before deciding {0}")]
    BudgetExceeded(String),
    #[error("descent did not reach the threshold within {0} iterations")]
    MaxIterExceeded(usize),
    #[error("certificate rejected: {0}")]
    InvalidCertificate(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
