//! Rotations `x ↦ x + a` on `Z/m` with sets stored as bit vectors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use super::{evaluate_shifts, DynError};
use crate::bits::BitVec;
use crate::intpoly::PolyOverK;
use crate::ring::NumberField;
use crate::{Integer, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRotationSystem {
    modulus: usize,
    step: usize,
    set: BitVec,
}

impl FiniteRotationSystem {
    pub fn new(modulus: usize, step: i64, set: &[usize]) -> Result<Self, DynError> {
        if modulus == 0 {
            return Err(DynError::InvalidSet("modulus must be positive".into()));
        }
        if let Some(&bad) = set.iter().find(|&&x| x >= modulus) {
            return Err(DynError::InvalidSet(format!("{bad} is not below {modulus}")));
        }
        Ok(FiniteRotationSystem {
            modulus,
            step: step.rem_euclid(modulus as i64) as usize,
            set: BitVec::from_indices(modulus, set.iter().copied()),
        })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn density(&self) -> Rational {
        Rational::new((self.set.count_ones() as i64).into(), (self.modulus as i64).into())
    }

    /// Residue of `s · a` modulo `m`.
    fn position(&self, s: &BigInt) -> usize {
        let m = BigInt::from(self.modulus);
        (s * BigInt::from(self.step)).mod_floor(&m).to_usize().expect("reduced")
    }

    pub fn correlation(&self, shifts: &[BigInt]) -> Rational {
        let mut acc = self.set.clone();
        for s in shifts {
            acc.and_assign(&self.set.rotated(self.position(s)));
        }
        Rational::new((acc.count_ones() as i64).into(), (self.modulus as i64).into())
    }

    pub fn multicorrelation(&self, shifts: &[Vec<BigInt>]) -> Result<Vec<Rational>, DynError> {
        if shifts.is_empty() {
            return Err(DynError::EmptyRange);
        }
        Ok(shifts.par_iter().map(|s| self.correlation(s)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiniteRationalReport {
    /// Period of the shift sequence modulo `m`.
    pub period: u64,
    pub average: String,
    pub average_f64: f64,
    pub density: String,
    /// The shift tuple visits every element of `(Z/m)^k` equally often.
    pub tuple_equidistributed: bool,
    /// `μ(A)^{k+1}` when the tuple is equidistributed.
    pub prediction: Option<String>,
    pub matches_prediction: Option<bool>,
    #[serde(skip)]
    pub average_exact: Rational,
}

/// Exact average of the correlations over one full period of the shifts.
pub fn finite_rational_check(
    system: &FiniteRotationSystem,
    family: &[PolyOverK],
    field: &NumberField,
    functional: &[i64],
) -> Result<FiniteRationalReport, DynError> {
    let den = family.iter().fold(Integer::one(), |acc, p| acc.lcm(&p.denominator()));
    let period = (den * BigInt::from(system.modulus)).to_u64().expect("period fits in u64");
    let shifts = evaluate_shifts(family, field, functional, 0..=(period as i64 - 1))?;
    let values = system.multicorrelation(&shifts)?;
    let total: Rational = values.iter().sum();
    let average = total / Rational::from_integer(period.into());

    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for s in &shifts {
        *counts.entry(s.iter().map(|v| system.position(v)).collect()).or_default() += 1;
    }
    let k = family.len() as u32;
    let cells = (system.modulus as u64).checked_pow(k);
    let first = counts.values().next().copied();
    let equi = cells == Some(counts.len() as u64) && counts.values().all(|&c| Some(c) == first);
    let density = system.density();
    let prediction = equi.then(|| num_traits::pow(density.clone(), k as usize + 1));
    Ok(FiniteRationalReport {
        period,
        average: average.to_string(),
        average_f64: crate::scalar::rat_to_f64(&average),
        density: density.to_string(),
        tuple_equidistributed: equi,
        matches_prediction: prediction.as_ref().map(|p| *p == average),
        prediction: prediction.map(|p| p.to_string()),
        average_exact: average,
    })
}
