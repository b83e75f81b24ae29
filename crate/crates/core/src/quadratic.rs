//! Exact real quadratic irrationals `a + b√D` with rational `a, b`.
//!
//! Ordering is decided exactly by sign tests on `a² - b²D`, so circle
//! geometry driven by a quadratic rotation never rounds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::scalar::IntScalar;

/// `rational + irrational * sqrt(radicand)`.
///
/// A value with zero irrational part is a plain rational and combines with
/// any radicand; two values with nonzero irrational parts must share their
/// radicand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratic<I: Clone + num_integer::Integer> {
    rational: Ratio<I>,
    irrational: Ratio<I>,
    radicand: I,
}

impl<I: IntScalar + Roots> Quadratic<I> {
    /// `a + b√D`; `D` must be a positive non-square.
    pub fn new(rational: Ratio<I>, irrational: Ratio<I>, radicand: I) -> Self {
        debug_assert!(radicand > I::zero());
        Self::normalized(rational, irrational, radicand)
    }

    pub fn from_rational(q: Ratio<I>) -> Self {
        Quadratic {
            rational: q,
            irrational: Ratio::zero(),
            radicand: I::zero(),
        }
    }

    pub fn from_int(k: I) -> Self {
        Self::from_rational(Ratio::from_integer(k))
    }

    pub fn rational_part(&self) -> &Ratio<I> {
        &self.rational
    }

    pub fn irrational_part(&self) -> &Ratio<I> {
        &self.irrational
    }

    pub fn radicand(&self) -> &I {
        &self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.irrational.is_zero()
    }

    fn joint_radicand(&self, other: &Self) -> I {
        match (self.irrational.is_zero(), other.irrational.is_zero()) {
            (true, _) => other.radicand.clone(),
            (_, true) => self.radicand.clone(),
            _ => {
                assert!(
                    self.radicand == other.radicand,
                    "mixing quadratic numbers with different radicands"
                );
                self.radicand.clone()
            }
        }
    }

    fn normalized(rational: Ratio<I>, irrational: Ratio<I>, radicand: I) -> Self {
        if irrational.is_zero() {
            Self::from_rational(rational)
        } else {
            Quadratic {
                rational,
                irrational,
                radicand,
            }
        }
    }

    /// Sign of the value: -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.rational);
        let sb = sign_of(&self.irrational);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with b²D
        let a2 = self.rational.clone() * self.rational.clone();
        let b2d = self.irrational.clone()
            * self.irrational.clone()
            * Ratio::from_integer(self.radicand.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    /// Floor of `c√D` for a rational `c`, exactly.
    fn floor_surd(c: &Ratio<I>, d: &I) -> I {
        if c.is_zero() {
            return I::zero();
        }
        // c√D = sign * sqrt(n² D) / m
        let n = c.numer().abs();
        let m = c.denom().clone();
        let s = (n.clone() * n * d.clone()).sqrt();
        if c.is_positive() {
            s.div_floor(&m)
        } else {
            // -sqrt(X)/m with sqrt(X) irrational: floor = -(floor(sqrt(X)/m)) - 1
            -(s.div_floor(&m)) - I::one()
        }
    }

    pub fn floor(&self) -> I {
        if self.irrational.is_zero() {
            return self.rational.floor().to_integer();
        }
        let guess = self.rational.floor().to_integer()
            + Self::floor_surd(&self.irrational, &self.radicand);
        // guess <= floor(self) <= guess + 1
        let next = Self::from_int(guess.clone() + I::one());
        if next <= *self {
            guess + I::one()
        } else {
            guess
        }
    }

    /// Representative in `[0, 1)`.
    pub fn frac(&self) -> Self {
        let f = self.floor();
        self.clone() - Self::from_int(f)
    }

    pub fn scale(&self, q: &Ratio<I>) -> Self {
        Self::normalized(
            self.rational.clone() * q.clone(),
            self.irrational.clone() * q.clone(),
            self.radicand.clone(),
        )
    }

    pub fn to_f64(&self) -> f64 {
        let a = ratio_to_f64(&self.rational);
        if self.irrational.is_zero() {
            return a;
        }
        let b = ratio_to_f64(&self.irrational);
        let r = self.radicand.to_f64().unwrap_or(f64::NAN).sqrt();
        if sign_of(&self.rational) * sign_of(&self.irrational) >= 0 {
            return a + b * r;
        }
        // opposite signs cancel; go through (a² - b²D) / (a - b√D) instead
        let norm = self.rational.clone() * self.rational.clone()
            - self.irrational.clone()
                * self.irrational.clone()
                * Ratio::from_integer(self.radicand.clone());
        ratio_to_f64(&norm) / (a - b * r)
    }
}

fn sign_of<I: IntScalar>(q: &Ratio<I>) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

fn ratio_to_f64<I: IntScalar>(q: &Ratio<I>) -> f64 {
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        return n / d;
    }
    let w = q.to_integer();
    let r = q.clone() - Ratio::from_integer(w.clone());
    w.to_f64().unwrap_or(f64::NAN) + r.numer().to_f64().unwrap_or(0.0) / r.denom().to_f64().unwrap_or(1.0)
}

impl<I: IntScalar + Roots> Add for Quadratic<I> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let d = self.joint_radicand(&rhs);
        Self::normalized(self.rational + rhs.rational, self.irrational + rhs.irrational, d)
    }
}

impl<I: IntScalar + Roots> Sub for Quadratic<I> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let d = self.joint_radicand(&rhs);
        Self::normalized(self.rational - rhs.rational, self.irrational - rhs.irrational, d)
    }
}

impl<I: IntScalar + Roots> Neg for Quadratic<I> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::normalized(-self.rational, -self.irrational, self.radicand)
    }
}

impl<I: IntScalar + Roots> Mul for Quadratic<I> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let d = self.joint_radicand(&rhs);
        let dr = Ratio::from_integer(d.clone());
        let a = self.rational.clone() * rhs.rational.clone()
            + self.irrational.clone() * rhs.irrational.clone() * dr;
        let b = self.rational * rhs.irrational + self.irrational * rhs.rational;
        Self::normalized(a, b, d)
    }
}

impl<I: IntScalar + Roots> PartialOrd for Quadratic<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<I: IntScalar + Roots> Ord for Quadratic<I> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.clone() - other.clone()).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl<I: IntScalar + Roots + fmt::Display> fmt::Display for Quadratic<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irrational.is_zero() {
            write!(f, "{}", self.rational)
        } else {
            write!(f, "{} + {}*sqrt({})", self.rational, self.irrational, self.radicand)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::QuadraticQ;
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn q(a: (i64, i64), b: (i64, i64), d: i64) -> QuadraticQ {
        Quadratic::new(rat(a.0, a.1), rat(b.0, b.1), BigInt::from(d))
    }

    #[test]
    fn sign_tests() {
        assert_eq!(q((-1, 1), (1, 1), 2).signum(), 1); // √2 - 1
        assert_eq!(q((3, 2), (-1, 1), 2).signum(), 1); // 1.5 - √2
        assert_eq!(q((7, 5), (-1, 1), 2).signum(), -1); // 1.4 - √2
        assert_eq!(q((0, 1), (0, 1), 2).signum(), 0);
    }

    #[test]
    fn floor_of_multiples() {
        let s2 = q((0, 1), (1, 1), 2);
        for k in -50i64..50 {
            let v = s2.scale(&rat(k, 1));
            let expect = ((k as f64) * std::f64::consts::SQRT_2).floor() as i64;
            assert_eq!(v.floor(), BigInt::from(expect), "k={k}");
        }
        // golden ratio (1 + √5)/2
        let phi = q((1, 2), (1, 2), 5);
        assert_eq!(phi.floor(), BigInt::from(1));
        assert_eq!(phi.scale(&rat(-3, 1)).floor(), BigInt::from(-5));
    }

    #[test]
    fn product_is_exact() {
        let a = q((1, 1), (1, 1), 2);
        let b = q((-1, 1), (1, 1), 2);
        assert_eq!(a * b, QuadraticQ::from_int(BigInt::from(1)));
    }

    #[test]
    fn machine_integer_instantiation() {
        let v = Quadratic::<i64>::new(Ratio::from_integer(0), Ratio::from_integer(3), 2);
        assert_eq!(v.floor(), 4);
        assert!(v.frac() < Quadratic::from_int(1));
    }

    #[test]
    fn to_f64_survives_cancellation() {
        let v = q((1_000_000_000_000_000, 1), (-707_106_781_186_547, 1), 2);
        assert!((v.to_f64() - 0.741_614_786_216_791_3).abs() < 1e-12, "{}", v.to_f64());
    }

    proptest! {
        #[test]
        fn frac_in_unit_interval(a in -10_000i64..10_000, ad in 1i64..50, b in -10_000i64..10_000, bd in 1i64..50) {
            let v = q((a, ad), (b, bd), 3);
            let f = v.frac();
            prop_assert!(f >= QuadraticQ::from_int(BigInt::from(0)));
            prop_assert!(f < QuadraticQ::from_int(BigInt::from(1)));
            prop_assert!((v.to_f64() - v.floor().to_f64().unwrap() - f.to_f64()).abs() < 1e-9);
        }
    }
}
