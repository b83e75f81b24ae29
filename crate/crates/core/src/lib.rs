//! Exact arithmetic in rings of integers of number fields, certification of
//! polynomial-family hypotheses, polynomial orbit closures on tori with Weyl
//! sum measurements, and desk-scale multiple-recurrence counting.
//!
//! The numeric core (matrices, polynomials, lattices, circle coordinates) is
//! generic over the scalar type; the aliases below fix the instantiations
//! used by the exact paths.

pub mod bits;
pub mod circle;
pub mod dynsim;
pub mod hnf;
pub mod intpoly;
pub mod linalg;
pub mod multipoly;
pub mod poly;
pub mod popdiff;
pub mod presets;
pub mod quadratic;
pub mod ring;
pub mod scalar;
pub mod torus;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Arbitrary-precision integer.
pub type Integer = BigInt;
/// Arbitrary-precision rational.
pub type Rational = BigRational;

pub type QMatrix = linalg::Matrix<Rational>;
pub type ZMatrix = linalg::Matrix<Integer>;
pub type QPoly = poly::Poly<Rational>;
pub type MultiPolyQ = multipoly::MultiPoly<Rational>;
/// Exact element `a + b√D` of a real quadratic field.
pub type QuadraticQ = quadratic::Quadratic<Integer>;



pub use ring::{AlgebraicInteger, AlgebraicNumber, MultMatrix, NumberField, RingError};
