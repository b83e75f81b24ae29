//! The skew product `(x, y) ↦ (x + α, y + 2x + α)` on `T^2`, whose `n`-th
//! power is `(x + nα, y + 2nx + n²α)`.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::DynError;
use crate::circle::{integrate_shifted_product, IntervalSet, StepFunction};
use crate::scalar::rat_to_f64;
use crate::torus::{Generators, Phase, SymbolicReal};
use crate::Rational;

/// Half-open rectangle `[x0, x1) × [y0, y1)` in `[0, 1)^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rectangle {
    pub x0: Rational,
    pub x1: Rational,
    pub y0: Rational,
    pub y1: Rational,
}

/// Vertical slab `[start, next start)` and the y-section of the set on it.
#[derive(Clone, Debug)]
struct Slab {
    start: f64,
    section: StepFunction<f64>,
    empty: bool,
}

#[derive(Clone, Debug)]
pub struct SkewProductSystem {
    alpha: SymbolicReal,
    generators: Generators,
    slabs: Vec<Slab>,
    measure: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SkewCorrelation {
    pub value: f64,
    /// Half the spread between the two interleaved half-grids.
    pub error_estimate: f64,
}

fn unit(q: &Rational) -> bool {
    *q >= Rational::from_integer(0.into()) && *q <= Rational::from_integer(1.into())
}

impl SkewProductSystem {
    pub fn new(alpha: SymbolicReal, generators: Generators, rects: &[Rectangle]) -> Result<Self, DynError> {
        for r in rects {
            if !(unit(&r.x0) && unit(&r.x1) && unit(&r.y0) && unit(&r.y1)) || r.x0 >= r.x1 || r.y0 >= r.y1 {
                return Err(DynError::InvalidSet(format!(
                    "rectangle [{}, {}) x [{}, {})",
                    r.x0, r.x1, r.y0, r.y1
                )));
            }
        }
        let mut cuts: Vec<Rational> = vec![Rational::from_integer(0.into())];
        for r in rects {
            cuts.push(r.x0.clone());
            cuts.push(r.x1.clone());
        }
        cuts.retain(|c| *c < Rational::from_integer(1.into()));
        cuts.sort();
        cuts.dedup();
        let mut slabs = Vec::new();
        let mut measure = Rational::from_integer(0.into());
        for (i, c) in cuts.iter().enumerate() {
            let end = cuts.get(i + 1).cloned().unwrap_or_else(|| Rational::from_integer(1.into()));
            let mut ys: Vec<(Rational, Rational)> = rects
                .iter()
                .filter(|r| r.x0 <= *c && *c < r.x1)
                .map(|r| (r.y0.clone(), r.y1.clone()))
                .collect();
            ys.sort();
            let mut merged: Vec<(Rational, Rational)> = Vec::new();
            for (a, b) in ys {
                match merged.last_mut() {
                    Some(last) if a <= last.1 => {
                        if b > last.1 {
                            last.1 = b;
                        }
                    }
                    _ => merged.push((a, b)),
                }
            }
            let set = IntervalSet::from_rationals(&merged).map_err(|e| DynError::InvalidSet(e.to_string()))?;
            measure += set.measure() * (end - c.clone());
            slabs.push(Slab {
                start: rat_to_f64(c),
                section: StepFunction::indicator(&set.map(rat_to_f64)),
                empty: merged.is_empty(),
            });
        }
        Ok(SkewProductSystem {
            alpha,
            generators,
            slabs,
            measure,
        })
    }

    pub fn measure(&self) -> &Rational {
        &self.measure
    }

    fn slab_at(&self, x: f64) -> &Slab {
        let i = self.slabs.partition_point(|s| s.start <= x);
        &self.slabs[i.saturating_sub(1)]
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        let s = self.slab_at(x);
        !s.empty && s.section.eval(&y) == Rational::from_integer(1.into())
    }

    /// y-section measure of `A ∩ T^{-s_1}A ∩ …` at `x = num / den`.
    fn section_measure(&self, num: &BigInt, den: &BigInt, shifts: &[BigInt], alpha_phases: &[(Phase, Phase)]) -> f64 {
        let x = Phase::from_rational(&Rational::new(num.clone(), den.clone()));
        let base = self.slab_at(x.turns());
        if base.empty {
            return 0.0;
        }
        let mut factors: Vec<(&StepFunction<f64>, f64)> = vec![(&base.section, 0.0)];
        for (s, (sa, s2a)) in shifts.iter().zip(alpha_phases) {
            let slab = self.slab_at((x + *sa).turns());
            if slab.empty {
                return 0.0;
            }
            // 2 s x mod 1, exactly
            let two_sx = (BigInt::from(2) * s * num).mod_floor(den);
            let y = Phase::from_rational(&Rational::new(two_sx, den.clone())) + *s2a;
            factors.push((&slab.section, y.turns()));
        }
        integrate_shifted_product(&factors)
    }

    fn alpha_phases(&self, shifts: &[BigInt]) -> Vec<(Phase, Phase)> {
        shifts
            .iter()
            .map(|s| {
                let sa = self.alpha.scale(&Rational::from_integer(s.clone())).to_phase(&self.generators);
                let s2a = self.alpha.scale(&Rational::from_integer(s * s)).to_phase(&self.generators);
                (sa, s2a)
            })
            .collect()
    }

    /// `μ(A ∩ T^{-s_1}A ∩ … ∩ T^{-s_k}A)` by the midpoint rule on `2g`
    /// vertical lines, with the y-integrals done exactly per line.
    pub fn correlation(&self, shifts: &[BigInt], g: usize) -> SkewCorrelation {
        let phases = self.alpha_phases(shifts);
        let den = BigInt::from(4 * g);
        let (mut even, mut odd) = (0.0, 0.0);
        for j in 0..2 * g {
            let num = BigInt::from(2 * j + 1);
            let v = self.section_measure(&num, &den, shifts, &phases);
            if j % 2 == 0 {
                even += v;
            } else {
                odd += v;
            }
        }
        let (even, odd) = (even / g as f64, odd / g as f64);
        SkewCorrelation {
            value: (even + odd) / 2.0,
            error_estimate: (even - odd).abs() / 2.0,
        }
    }

    pub fn multicorrelation(&self, shifts: &[Vec<BigInt>], g: usize) -> Result<Vec<SkewCorrelation>, DynError> {
        if shifts.is_empty() {
            return Err(DynError::EmptyRange);
        }
        Ok(shifts.par_iter().map(|s| self.correlation(s, g)).collect())
    }

    /// Monte Carlo estimate and its standard error.
    pub fn correlation_monte_carlo(&self, shifts: &[BigInt], samples: usize, seed: u64) -> (f64, f64) {
        let phases = self.alpha_phases(shifts);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hits = 0usize;
        for _ in 0..samples {
            let x: u128 = rng.gen();
            let y: u128 = rng.gen();
            let (px, py) = (Phase(x), Phase(y));
            if !self.contains(px.turns(), py.turns()) {
                continue;
            }
            let ok = shifts.iter().zip(&phases).all(|(s, (sa, s2a))| {
                // 2 s x in fixed point
                let two_s = (BigInt::from(2) * s).mod_floor(&(BigInt::from(1) << 128)).to_u128().unwrap_or(0);
                let ny = py + px.times(two_s) + *s2a;
                self.contains((px + *sa).turns(), ny.turns())
            });
            if ok {
                hits += 1;
            }
        }
        let p = hits as f64 / samples as f64;
        (p, (p * (1.0 - p) / samples as f64).sqrt())
    }
}
