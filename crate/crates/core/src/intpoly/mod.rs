//! Univariate polynomials over a number field and the certificates built on
//! their coordinate expansion: `O_K`-valuedness, independence, and
//! (joint) intersectivity modulo principal subgroups.

mod binomial;
mod independence;
mod intersective;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{AlgebraicNumber, FieldId, NumberField, RingError};
use crate::scalar::{denominator_lcm, parse_rational};
use crate::{Integer, MultiPolyQ, Rational};

pub use binomial::{binomial_coefficients, is_integer_valued, is_ok_valued};
pub use independence::{
    independence_with_constants, jacobian_alg_independence, jacobian_points, linear_rank,
};
pub use intersective::{
    certify_family, default_moduli, intersective_shift, joint_intersectivity_search,
    IntersectiveShift, IntersectivityCertificate, ModulusVerdict,
};

/// Largest degree accepted for a [`PolyOverK`].
pub const MAX_DEGREE: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntPolyError {
    #[error("polynomial degree {0} exceeds the limit of {MAX_DEGREE}")]
    DegreeLimit(usize),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("modulus must be nonzero")]
    ZeroModulus,
    #[error("family member {0} is not O_K-valued")]
    NotOkValued(usize),
    #[error("p_{index}(ξ) is not in rO_K")]
    PreconditionFailed { index: usize },
    #[error("{got} polynomials in {vars} variables cannot be algebraically independent")]
    TooManyPolynomials { got: usize, vars: usize },
    #[error("sampled check of the intersective shift failed at n = {0}")]
    ShiftVerificationFailed(String),
    #[error("cannot parse coefficient literal {0:?}")]
    BadLiteral(String),
}

/// A polynomial in `K[x]`, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyOverK {
    coeffs: Vec<AlgebraicNumber>,
    field: FieldId,
}

/// Coefficient literal: a rational string embedded in K, or explicit
/// coordinates over the integral basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffLiteral {
    Rational(String),
    Integer(i64),
    Coords(Vec<CoordLiteral>),
}

/// One coordinate of a [`CoeffLiteral::Coords`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordLiteral {
    Integer(i64),
    Rational(String),
}

impl PolyOverK {
    pub fn new(field: &NumberField, coeffs: Vec<AlgebraicNumber>) -> Result<Self, IntPolyError> {
        for c in &coeffs {
            field.check(c)?;
        }
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(AlgebraicNumber::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(IntPolyError::DegreeLimit(coeffs.len() - 1));
        }
        Ok(PolyOverK {
            coeffs,
            field: field.id(),
        })
    }

    /// Polynomial with rational coefficients, embedded in `K[x]`.
    pub fn from_rationals(field: &NumberField, coeffs: &[Rational]) -> Result<Self, IntPolyError> {
        Self::new(field, coeffs.iter().map(|q| field.from_rational(q.clone())).collect())
    }

    pub fn from_i64s(field: &NumberField, coeffs: &[i64]) -> Result<Self, IntPolyError> {
        let qs: Vec<Rational> = coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect();
        Self::from_rationals(field, &qs)
    }

    pub fn parse(field: &NumberField, literals: &[CoeffLiteral]) -> Result<Self, IntPolyError> {
        let mut coeffs = Vec::with_capacity(literals.len());
        for lit in literals {
            let c = match lit {
                CoeffLiteral::Integer(v) => field.from_rational(Rational::from_integer((*v).into())),
                CoeffLiteral::Rational(s) => field.from_rational(
                    parse_rational(s).ok_or_else(|| IntPolyError::BadLiteral(s.clone()))?,
                ),
                CoeffLiteral::Coords(cs) => {
                    let qs = cs
                        .iter()
                        .map(|c| match c {
                            CoordLiteral::Integer(v) => Ok(Rational::from_integer((*v).into())),
                            CoordLiteral::Rational(s) => {
                                parse_rational(s).ok_or_else(|| IntPolyError::BadLiteral(s.clone()))
                            }
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    field.element(qs)?
                }
            };
            coeffs.push(c);
        }
        Self::new(field, coeffs)
    }

    pub fn zero(field: &NumberField) -> Self {
        PolyOverK {
            coeffs: Vec::new(),
            field: field.id(),
        }
    }

    /// The identity polynomial `x`.
    pub fn x(field: &NumberField) -> Self {
        PolyOverK {
            coeffs: vec![field.zero(), field.one()],
            field: field.id(),
        }
    }

    pub fn coeffs(&self) -> &[AlgebraicNumber] {
        &self.coeffs
    }

    pub fn field_id(&self) -> FieldId {
        self.field
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, field: &NumberField, n: &AlgebraicNumber) -> Result<AlgebraicNumber, IntPolyError> {
        field.check(n)?;
        if self.field != field.id() {
            return Err(RingError::FieldMismatch.into());
        }
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add_unchecked(&field.mul_unchecked(&acc, n), c);
        }
        Ok(acc)
    }

    /// `α · p`.
    pub fn scale(&self, field: &NumberField, alpha: &AlgebraicNumber) -> Result<Self, IntPolyError> {
        field.check(alpha)?;
        Self::new(field, self.coeffs.iter().map(|c| field.mul_unchecked(alpha, c)).collect())
    }

    pub fn add(&self, field: &NumberField, other: &Self) -> Result<Self, IntPolyError> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = field.zero();
        Self::new(
            field,
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).unwrap_or(&zero);
                    let b = other.coeffs.get(i).unwrap_or(&zero);
                    field.add_unchecked(a, b)
                })
                .collect(),
        )
    }

    /// `p(x) - p(0)`.
    pub fn without_constant(&self, field: &NumberField) -> Self {
        let mut coeffs = self.coeffs.clone();
        if let Some(c) = coeffs.first_mut() {
            *c = field.zero();
        }
        Self::new(field, coeffs).expect("same field")
    }

    /// Least common denominator of all coefficient coordinates.
    pub fn denominator(&self) -> Integer {
        denominator_lcm(self.coeffs.iter().flat_map(|c| c.coords()))
    }

    /// Expansion `p(Σ x_j b_j) = Σ_i p_i(x_1..x_d) b_i`.
    pub fn coordinate_expand(&self, field: &NumberField) -> Result<CoordinateSystem, IntPolyError> {
        if self.field != field.id() {
            return Err(RingError::FieldMismatch.into());
        }
        let d = field.degree();
        let vars: Vec<MultiPolyQ> = (0..d).map(|j| MultiPolyQ::var(d, j)).collect();
        let mut acc: Vec<MultiPolyQ> = vec![MultiPolyQ::zero(d); d];
        for c in self.coeffs.iter().rev() {
            let mut next = symbolic_mul(field, &acc, &vars);
            for (m, q) in c.coords().iter().enumerate() {
                if !q.is_zero() {
                    next[m] = next[m].add(&MultiPolyQ::constant(d, q.clone()));
                }
            }
            acc = next;
        }
        Ok(CoordinateSystem {
            coords: acc,
            field: field.id(),
        })
    }
}

/// Product of two coordinate vectors of polynomials through the structure constants.
fn symbolic_mul(field: &NumberField, a: &[MultiPolyQ], b: &[MultiPolyQ]) -> Vec<MultiPolyQ> {
    let d = field.degree();
    let mut out = vec![MultiPolyQ::zero(d); d];
    for (j, pj) in a.iter().enumerate() {
        if pj.is_zero() {
            continue;
        }
        for (l, ql) in b.iter().enumerate() {
            if ql.is_zero() {
                continue;
            }
            let prod = pj.mul(ql);
            for (m, o) in out.iter_mut().enumerate() {
                let s = field.structure_constant(j, l, m);
                if !s.is_zero() {
                    *o = o.add(&prod.scale(&Rational::from_integer(s.clone())));
                }
            }
        }
    }
    out
}

/// The `d` rational polynomials `p_1..p_d` expanding one `p ∈ K[x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateSystem {
    coords: Vec<MultiPolyQ>,
    field: FieldId,
}

impl CoordinateSystem {
    pub fn polys(&self) -> &[MultiPolyQ] {
        &self.coords
    }

    pub fn into_polys(self) -> Vec<MultiPolyQ> {
        self.coords
    }

    /// `Σ_i p_i(coords(n)) b_i`.
    pub fn eval(&self, field: &NumberField, n: &AlgebraicNumber) -> Result<AlgebraicNumber, RingError> {
        field.check(n)?;
        if self.field != field.id() {
            return Err(RingError::FieldMismatch);
        }
        field.element(self.coords.iter().map(|p| p.eval(n.coords())).collect())
    }
}

/// All coordinate polynomials `p_{i,j}` of a family, flattened.
pub fn coordinate_family(family: &[PolyOverK], field: &NumberField) -> Result<Vec<MultiPolyQ>, IntPolyError> {
    let mut out = Vec::new();
    for p in family {
        out.extend(p.coordinate_expand(field)?.into_polys());
    }
    Ok(out)
}

/// Whether `{1} ∪ {p_{i,j}}` is linearly independent over Q, i.e. the
/// coordinate family of an independent family over K.
pub fn family_is_independent(family: &[PolyOverK], field: &NumberField) -> Result<bool, IntPolyError> {
    Ok(independence_with_constants(&coordinate_family(family, field)?))
}
