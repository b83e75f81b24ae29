//! Circle rotations `x ↦ x + α` acting on finite unions of intervals.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::DynError;
use crate::circle::{intersection_measure, CircleCoord, IntervalSet};
use crate::torus::{Generators, SymbolicReal};
use crate::{QuadraticQ, Rational};

/// A rotation number whose integer multiples can be placed on the circle.
pub trait RotationNumber: Sync {
    type Coord: CircleCoord;
    /// `s · α mod 1`.
    fn multiple(&self, s: &BigInt) -> Self::Coord;
}

impl RotationNumber for QuadraticQ {
    type Coord = QuadraticQ;
    fn multiple(&self, s: &BigInt) -> QuadraticQ {
        self.scale(&Rational::from_integer(s.clone())).frac()
    }
}

impl RotationNumber for Rational {
    type Coord = Rational;
    fn multiple(&self, s: &BigInt) -> Rational {
        CircleCoord::frac(&(self * Rational::from_integer(s.clone())))
    }
}

/// Rotation by a combination of several generators, placed on the circle
/// in 128-bit fixed point and then rounded to `f64`.
#[derive(Clone, Debug)]
pub struct FloatAngle {
    pub alpha: SymbolicReal,
    pub generators: Generators,
}

impl RotationNumber for FloatAngle {
    type Coord = f64;
    fn multiple(&self, s: &BigInt) -> f64 {
        self.alpha.scale(&Rational::from_integer(s.clone())).to_phase(&self.generators).turns()
    }
}

/// Rotation by `α` on `T` with a set `A` of rational intervals.
#[derive(Clone, Debug)]
pub struct IntervalRotationSystem<R: RotationNumber> {
    alpha: R,
    set: IntervalSet<Rational>,
    geometry: IntervalSet<R::Coord>,
    measure: Rational,
}

impl<R: RotationNumber> IntervalRotationSystem<R> {
    pub fn new(alpha: R, set: IntervalSet<Rational>) -> Self {
        let geometry = set.map(R::Coord::from_rational);
        let measure = set.measure();
        IntervalRotationSystem {
            alpha,
            set,
            geometry,
            measure,
        }
    }

    pub fn alpha(&self) -> &R {
        &self.alpha
    }

    pub fn set(&self) -> &IntervalSet<Rational> {
        &self.set
    }

    pub fn measure(&self) -> &Rational {
        &self.measure
    }

    /// `μ(A ∩ (A - s_1 α) ∩ … ∩ (A - s_k α))` for one shift tuple.
    pub fn correlation(&self, shifts: &[BigInt]) -> R::Coord {
        let pos: Vec<R::Coord> = shifts.iter().map(|s| self.alpha.multiple(s)).collect();
        intersection_measure(&self.geometry, &pos)
    }

    /// One exact value per shift tuple, in order.
    pub fn multicorrelation(&self, shifts: &[Vec<BigInt>]) -> Result<Vec<R::Coord>, DynError> {
        if shifts.is_empty() {
            return Err(DynError::EmptyRange);
        }
        Ok(shifts.par_iter().map(|s| self.correlation(s)).collect())
    }
}
