//! Desk-scale measure-preserving systems and the correlation statistics
//! run on them: circle rotations with interval sets, finite cyclic
//! rotations, and the quadratic skew product on `T^2`.

mod finite;
mod khintchine;
mod kronecker;
mod rotation;
mod skew;

use num_bigint::BigInt;
use thiserror::Error;

use crate::intpoly::{certify_family, IntPolyError, IntersectivityCertificate, PolyOverK};
use crate::ring::{AlgebraicInteger, NumberField};

pub use finite::{finite_rational_check, FiniteRationalReport, FiniteRotationSystem};
pub use khintchine::{khintchine_report, max_gap, KhintchineReport};
pub use kronecker::{gauss_legendre, kronecker_limit_check, KroneckerCheck, KroneckerRow, LimitFunction};
pub use rotation::{FloatAngle, IntervalRotationSystem, RotationNumber};
pub use skew::{Rectangle, SkewCorrelation, SkewProductSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynError {
    #[error("empty range")]
    EmptyRange,
    #[error("r and s must be distinct and nonzero")]
    DegenerateShifts,
    #[error("family has no common root modulo {0}")]
    NotJointlyIntersective(String),
    #[error("shift polynomial value {0} is not an algebraic integer")]
    NonIntegralShift(String),
    #[error("functional has {got} weights, field degree is {expected}")]
    FunctionalLength { expected: usize, got: usize },
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error(transparent)]
    IntPoly(#[from] IntPolyError),
}

/// Refuses a family that fails joint intersectivity at any of the moduli.
pub fn admit_family(
    family: &[PolyOverK],
    moduli: &[AlgebraicInteger],
    field: &NumberField,
) -> Result<IntersectivityCertificate, DynError> {
    let cert = certify_family(family, moduli, field)?;
    if let Some(m) = cert.first_failure() {
        return Err(DynError::NotJointlyIntersective(m.as_number().to_string()));
    }
    Ok(cert)
}

/// Integer shifts `λ(p_i(n))` for each `n` in `range`, where `λ` is an
/// integer functional on the coordinates of `O_K`.
pub fn evaluate_shifts(
    family: &[PolyOverK],
    field: &NumberField,
    functional: &[i64],
    range: std::ops::RangeInclusive<i64>,
) -> Result<Vec<Vec<BigInt>>, DynError> {
    if functional.len() != field.degree() {
        return Err(DynError::FunctionalLength {
            expected: field.degree(),
            got: functional.len(),
        });
    }
    let mut out = Vec::new();
    for n in range {
        let x = field.from_rational(crate::Rational::from_integer(n.into()));
        let mut row = Vec::with_capacity(family.len());
        for p in family {
            let v = p.eval(field, &x)?;
            if !v.is_integral() {
                return Err(DynError::NonIntegralShift(v.to_string()));
            }
            let s = v
                .coords()
                .iter()
                .zip(functional)
                .fold(BigInt::from(0), |acc, (c, &w)| acc + c.to_integer() * BigInt::from(w));
            row.push(s);
        }
        out.push(row);
    }
    if out.is_empty() {
        return Err(DynError::EmptyRange);
    }
    Ok(out)
}
