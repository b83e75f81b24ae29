//! Scalar traits shared by the generic linear algebra, polynomial and
//! circle-geometry code.
//!
//! Exact paths instantiate these with [`BigRational`]/[`BigInt`]; the
//! floating instantiations exist for measurement code and for quick
//! cross-checks.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// A field scalar: rationals (exact) or floats (approximate).
pub trait FieldScalar: Num + Signed + Clone + Debug + 'static {
    /// Whether zero tests on this type are trustworthy.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// Zero test used by pivoting. Floats compare against a small tolerance.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

impl<I> FieldScalar for Ratio<I>
where
    I: Integer + Signed + Clone + Debug + FromPrimitive + 'static,
{
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(I::from_i64(v).expect("integer conversion"))
    }
}

impl FieldScalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn is_negligible(&self) -> bool {
        self.abs() < 1e-12
    }
}

impl FieldScalar for f32 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f32
    }

    fn is_negligible(&self) -> bool {
        self.abs() < 1e-6
    }
}

/// Integer scalars usable by the Hermite normal form code.
pub trait IntScalar: Integer + Signed + Clone + Debug + FromPrimitive + ToPrimitive + 'static {}

impl<T> IntScalar for T where T: Integer + Signed + Clone + Debug + FromPrimitive + ToPrimitive + 'static {}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Floor of a rational as an integer.
pub fn floor_rat(q: &BigRational) -> BigInt {
    q.numer().div_floor(q.denom())
}

/// Least common multiple of the denominators of `values` (1 for an empty list).
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Parses "3", "-3/2" or "0.25" into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part: BigInt = frac.parse().ok()?;
        let mag = int_part.abs() * &scale + frac_part;
        let num = if neg { -mag } else { mag };
        return Some(BigRational::new(num, scale));
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

pub fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // very large numerators: scale down through the float division
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}
