//! Geometry on the circle `T = R/Z`: coordinates, interval sets and
//! piecewise-constant functions, with an exact sweep for integrals of
//! products of translated step functions.
//!
//! [`CircleCoord`] is implemented for exact rationals, exact quadratic
//! irrationals and `f64`; the same sweep serves all three.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::quadratic::Quadratic;
use crate::scalar::{floor_rat, rat_to_f64};
use crate::Rational;

pub trait CircleCoord:
    Clone + PartialOrd + Debug + Send + Sync + Add<Output = Self> + Sub<Output = Self>
{
    fn zero() -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn scale(&self, q: &Rational) -> Self;
    /// Representative in `[0, 1)`.
    fn frac(&self) -> Self;
    fn to_f64(&self) -> f64;

    fn one() -> Self {
        Self::from_rational(&<Rational as One>::one())
    }

    fn cmp_coord(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).expect("circle coordinates are totally ordered")
    }
}

impl CircleCoord for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
    fn frac(&self) -> Self {
        self - Rational::from_integer(floor_rat(self))
    }
    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }
}

impl CircleCoord for Quadratic<BigInt> {
    fn zero() -> Self {
        Quadratic::from_int(BigInt::zero())
    }
    fn from_rational(q: &Rational) -> Self {
        Quadratic::from_rational(q.clone())
    }
    fn scale(&self, q: &Rational) -> Self {
        Quadratic::scale(self, q)
    }
    fn frac(&self) -> Self {
        Quadratic::frac(self)
    }
    fn to_f64(&self) -> f64 {
        Quadratic::to_f64(self)
    }
}

impl CircleCoord for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_rational(q: &Rational) -> Self {
        rat_to_f64(q)
    }
    fn scale(&self, q: &Rational) -> Self {
        self * rat_to_f64(q)
    }
    fn frac(&self) -> Self {
        let f = self - self.floor();
        if f >= 1.0 {
            0.0
        } else {
            f
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("interval [{0}, {1}) is empty or leaves [0, 1)")]
    OutOfRange(String, String),
    #[error("intervals overlap")]
    Overlap,
}

/// Finite union of disjoint half-open intervals in `[0, 1)`, sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSet<C> {
    intervals: Vec<(C, C)>,
}

impl<C: CircleCoord> IntervalSet<C> {
    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalSet {
            intervals: vec![(C::zero(), C::one())],
        }
    }

    pub fn new(mut intervals: Vec<(C, C)>) -> Result<Self, IntervalError> {
        for (a, b) in &intervals {
            if *a < C::zero() || *b > C::one() || a >= b {
                return Err(IntervalError::OutOfRange(format!("{a:?}"), format!("{b:?}")));
            }
        }
        intervals.sort_by(|x, y| x.0.cmp_coord(&y.0));
        if intervals.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(IntervalError::Overlap);
        }
        Ok(IntervalSet { intervals })
    }

    pub fn from_rationals(intervals: &[(Rational, Rational)]) -> Result<Self, IntervalError> {
        Self::new(
            intervals
                .iter()
                .map(|(a, b)| (C::from_rational(a), C::from_rational(b)))
                .collect(),
        )
    }

    pub fn intervals(&self) -> &[(C, C)] {
        &self.intervals
    }

    pub fn measure(&self) -> C {
        self.intervals
            .iter()
            .fold(C::zero(), |acc, (a, b)| acc + (b.clone() - a.clone()))
    }

    /// `A + β` on the circle.
    pub fn translate(&self, beta: &C) -> Self {
        let mut out = Vec::new();
        for (a, b) in &self.intervals {
            let len = b.clone() - a.clone();
            let start = (a.clone() + beta.clone()).frac();
            let end = start.clone() + len;
            if end > C::one() {
                out.push((start, C::one()));
                out.push((C::zero(), end - C::one()));
            } else {
                out.push((start, end));
            }
        }
        out.retain(|(a, b)| a < b);
        out.sort_by(|x, y| x.0.cmp_coord(&y.0));
        IntervalSet { intervals: out }
    }

    pub fn contains(&self, x: &C) -> bool {
        let x = x.frac();
        self.intervals.iter().any(|(a, b)| *a <= x && x < *b)
    }

    pub fn map<D: CircleCoord>(&self, f: impl Fn(&C) -> D) -> IntervalSet<D> {
        IntervalSet {
            intervals: self.intervals.iter().map(|(a, b)| (f(a), f(b))).collect(),
        }
    }
}

/// Piecewise-constant function on the circle with rational values:
/// value `values[i]` on `[starts[i], starts[i+1])`, the last piece running to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction<C> {
    starts: Vec<C>,
    values: Vec<Rational>,
}

impl<C: CircleCoord> StepFunction<C> {
    pub fn constant(v: Rational) -> Self {
        StepFunction {
            starts: vec![C::zero()],
            values: vec![v],
        }
    }

    /// Pieces as (start, value); starts must lie in `[0, 1)`. A missing
    /// piece at 0 is filled with value 0.
    pub fn from_pieces(mut pieces: Vec<(C, Rational)>) -> Self {
        pieces.sort_by(|x, y| x.0.cmp_coord(&y.0));
        if pieces.first().is_none_or(|p| p.0 > C::zero()) {
            pieces.insert(0, (C::zero(), <Rational as Zero>::zero()));
        }
        let (starts, values) = pieces.into_iter().unzip();
        StepFunction { starts, values }
    }

    pub fn indicator(set: &IntervalSet<C>) -> Self {
        let mut pieces = Vec::new();
        for (a, b) in set.intervals() {
            pieces.push((a.clone(), <Rational as One>::one()));
            if *b < C::one() {
                pieces.push((b.clone(), <Rational as Zero>::zero()));
            }
        }
        // adjacent intervals produce a 0-piece and a 1-piece at the same point
        pieces.sort_by(|x, y| x.0.cmp_coord(&y.0));
        let mut merged: Vec<(C, Rational)> = Vec::new();
        for p in pieces {
            match merged.last_mut() {
                Some(last) if last.0.cmp_coord(&p.0) == Ordering::Equal => {
                    if p.1.is_one() {
                        last.1 = p.1;
                    }
                }
                _ => merged.push(p),
            }
        }
        Self::from_pieces(merged)
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&C, &Rational)> {
        self.starts.iter().zip(&self.values)
    }

    pub fn eval(&self, x: &C) -> Rational {
        let x = x.frac();
        let idx = self.starts.iter().rposition(|s| *s <= x).unwrap_or(0);
        self.values[idx].clone()
    }

    /// Pieces of `x ↦ f(x + s)`, sorted, starting at 0.
    pub fn shifted_pieces(&self, s: &C) -> Vec<(C, Rational)> {
        let mut out: Vec<(C, Rational)> = self
            .starts
            .iter()
            .zip(&self.values)
            .map(|(b, v)| ((b.clone() - s.clone()).frac(), v.clone()))
            .collect();
        out.sort_by(|x, y| x.0.cmp_coord(&y.0));
        if out[0].0 > C::zero() {
            let wrap = out.last().unwrap().1.clone();
            out.insert(0, (C::zero(), wrap));
        }
        out
    }

    pub fn map_coords<D: CircleCoord>(&self, f: impl Fn(&C) -> D) -> StepFunction<D> {
        StepFunction {
            starts: self.starts.iter().map(f).collect(),
            values: self.values.clone(),
        }
    }

    /// Integral over the circle.
    pub fn mean(&self) -> C {
        integrate_shifted_product(&[(self, C::zero())])
    }
}

/// `∫_T Π_i f_i(x + s_i) dx` by a sweep over all shifted breakpoints.
pub fn integrate_shifted_product<C: CircleCoord>(factors: &[(&StepFunction<C>, C)]) -> C {
    if factors.is_empty() {
        return C::one();
    }
    let shifted: Vec<Vec<(C, Rational)>> = factors
        .iter()
        .map(|(f, s)| f.shifted_pieces(s))
        .collect();
    let mut points: Vec<C> = shifted
        .iter()
        .flat_map(|p| p.iter().map(|(x, _)| x.clone()))
        .collect();
    points.sort_by(|a, b| a.cmp_coord(b));
    points.dedup_by(|a, b| a.cmp_coord(b) == Ordering::Equal);
    let mut cursor = vec![0usize; shifted.len()];
    let mut total = C::zero();
    for (i, p) in points.iter().enumerate() {
        let mut product = <Rational as One>::one();
        for (f, c) in shifted.iter().zip(cursor.iter_mut()) {
            while *c + 1 < f.len() && f[*c + 1].0 <= *p {
                *c += 1;
            }
            product *= &f[*c].1;
            if product.is_zero() {
                break;
            }
        }
        if product.is_zero() {
            continue;
        }
        let end = points.get(i + 1).cloned().unwrap_or_else(C::one);
        total = total + (end - p.clone()).scale(&product);
    }
    total
}

/// Measure of `A ∩ (A - s_1) ∩ ... ∩ (A - s_k)`.
pub fn intersection_measure<C: CircleCoord>(set: &IntervalSet<C>, shifts: &[C]) -> C {
    let ind = StepFunction::indicator(set);
    let mut factors = vec![(&ind, C::zero())];
    factors.extend(shifts.iter().map(|s| (&ind, s.clone())));
    integrate_shifted_product(&factors)
}
