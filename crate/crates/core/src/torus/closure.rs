//! Orbit closures of polynomial torus sequences as finite unions of
//! cosets of a subtorus.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::sequence::{integer_vector, is_zero_vec, PhasePolynomial};
use super::symbolic::{Generators, Phase, SymbolicReal};
use super::{PolynomialTorusSequence, TorusError};
use crate::hnf::{integer_kernel, saturated_basis};
use crate::linalg::Matrix;
use crate::scalar::{denominator_lcm, floor_rat};
use crate::{Integer, Rational};

/// Largest number of congruence classes enumerated.
pub const MAX_CLASSES: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    /// `u(w)` for the representative class `w`.
    pub offset: Vec<SymbolicReal>,
    pub representative: Vec<i64>,
}

/// `⋃_w (offset_w + V) mod Z^m`, indexed by `n mod M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtorusCosetUnion {
    dim: usize,
    basis: Vec<Vec<Integer>>,
    annihilator: Vec<Vec<Integer>>,
    modulus: Vec<u64>,
    class_to_coset: Vec<usize>,
    cosets: Vec<Coset>,
}

fn dot(a: &[Integer], v: &[Rational]) -> Rational {
    a.iter()
        .zip(v)
        .fold(Rational::zero(), |acc, (x, y)| acc + Rational::from_integer(x.clone()) * y.clone())
}

fn frac(q: &Rational) -> Rational {
    q - Rational::from_integer(floor_rat(q))
}

fn class_points(modulus: &[u64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &m in modulus {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..m as i64).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn orbit_closure(u: &PolynomialTorusSequence) -> Result<SubtorusCosetUnion, TorusError> {
    let m = u.dim();
    let d = u.nvars();
    let mut vectors = Vec::new();
    for i in 0..u.ngens() {
        let part = u.generator_part(i);
        let monomials: std::collections::BTreeSet<&Vec<u32>> = part.iter().flat_map(|p| p.support()).collect();
        for e in monomials {
            let v: Vec<Rational> = part.iter().map(|p| p.coeff(e)).collect();
            if !is_zero_vec(&v) {
                vectors.push(integer_vector(&v));
            }
        }
    }
    let basis = saturated_basis(&vectors, m);
    let annihilator = if basis.is_empty() {
        (0..m)
            .map(|i| (0..m).map(|j| if i == j { Integer::one() } else { Integer::zero() }).collect())
            .collect()
    } else {
        integer_kernel(&Matrix::from_rows(basis.clone()))
    };

    let rational = u.rational_part();
    let l = denominator_lcm(rational.iter().flat_map(|p| p.terms().map(|(_, c)| c)));
    let l: u64 = u64::try_from(&l).map_err(|_| TorusError::CongruenceTooLarge)?;
    let classes = (l as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if classes > MAX_CLASSES as u128 {
        return Err(TorusError::CongruenceTooLarge);
    }
    let modulus = vec![l; d];
    let base = u.base_point();
    let mut keys: BTreeMap<Vec<Rational>, usize> = BTreeMap::new();
    let mut cosets = Vec::new();
    let mut class_to_coset = Vec::new();
    for w in class_points(&modulus) {
        let pt: Vec<Rational> = w.iter().map(|&k| Rational::from_integer(k.into())).collect();
        let r: Vec<Rational> = rational.iter().map(|p| p.eval(&pt)).collect();
        let key: Vec<Rational> = annihilator.iter().map(|a| frac(&dot(a, &r))).collect();
        let idx = *keys.entry(key).or_insert_with(|| {
            cosets.push(Coset {
                offset: base
                    .iter()
                    .zip(&r)
                    .map(|(b, x)| b.add(&SymbolicReal::rational(x.clone())))
                    .collect(),
                representative: w.clone(),
            });
            cosets.len() - 1
        });
        class_to_coset.push(idx);
    }
    Ok(SubtorusCosetUnion {
        dim: m,
        basis,
        annihilator,
        modulus,
        class_to_coset,
        cosets,
    })
}

impl SubtorusCosetUnion {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Saturated HNF basis rows of `V`.
    pub fn subspace_basis(&self) -> &[Vec<Integer>] {
        &self.basis
    }

    pub fn subspace_dim(&self) -> usize {
        self.basis.len()
    }

    /// Integer basis of the characters vanishing on `V`.
    pub fn annihilator(&self) -> &[Vec<Integer>] {
        &self.annihilator
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    pub fn is_full_torus(&self) -> bool {
        self.basis.len() == self.dim
    }

    fn class_index(&self, n: &[i64]) -> usize {
        n.iter()
            .zip(&self.modulus)
            .fold(0usize, |acc, (&k, &m)| acc * m as usize + k.rem_euclid(m as i64) as usize)
    }

    pub fn coset_of(&self, n: &[i64]) -> &Coset {
        &self.cosets[self.class_to_coset[self.class_index(n)]]
    }

    pub fn annihilates(&self, c: &[i64]) -> bool {
        self.basis.iter().all(|v| {
            v.iter()
                .zip(c)
                .fold(Integer::zero(), |acc, (x, &k)| acc + x * Integer::from(k))
                .is_zero()
        })
    }

    fn character_values(&self, c: &[i64]) -> Vec<SymbolicReal> {
        let classes = class_points(&self.modulus);
        classes
            .iter()
            .map(|w| {
                let off = &self.coset_of(w).offset;
                c.iter()
                    .zip(off)
                    .fold(SymbolicReal::zero(), |acc, (&k, x)| acc.add(&x.scale(&Rational::from_integer(k.into()))))
            })
            .collect()
    }

    /// `c` kills `V` and takes one value on every coset.
    pub fn constant_on_cosets(&self, c: &[i64]) -> bool {
        if !self.annihilates(c) {
            return false;
        }
        let vals = self.character_values(c);
        vals.iter().all(|v| v.eq_mod1(&vals[0]))
    }

    /// Limit of the character average: zero off the annihilator of `V`,
    /// otherwise the mean of `e(c · offset)` over congruence classes.
    pub fn predicted_average(&self, c: &[i64], gens: &Generators) -> Complex64 {
        if !self.annihilates(c) {
            return Complex64::zero();
        }
        let vals = self.character_values(c);
        let mut sum = Complex64::zero();
        for v in &vals {
            sum += e(v.to_phase(gens));
        }
        sum / vals.len() as f64
    }

    /// Largest distance from `u(n)` to its coset, measured by the annihilator
    /// characters, over the sample points.
    pub fn membership_distance(&self, u: &PolynomialTorusSequence, gens: &Generators, samples: &[Vec<i64>]) -> f64 {
        let phases: Vec<PhasePolynomial> = self
            .annihilator
            .iter()
            .map(|a| {
                let c: Vec<i64> = a.iter().map(|x| i64::try_from(x).expect("small annihilator")).collect();
                PhasePolynomial::new(&u.character_phase(&c), gens)
            })
            .collect();
        let mut worst = 0f64;
        for n in samples {
            let off = &self.coset_of(n).offset;
            for (a, ph) in self.annihilator.iter().zip(&phases) {
                let target = a.iter().zip(off).fold(Phase::default(), |acc, (k, x)| {
                    acc + x.scale(&Rational::from_integer(k.clone())).to_phase(gens)
                });
                worst = worst.max((ph.eval(n) - target).distance_to_zero());
            }
        }
        worst
    }
}

/// `e(θ) = exp(2πiθ)`.
pub fn e(p: Phase) -> Complex64 {
    let t = std::f64::consts::TAU * p.turns();
    Complex64::new(t.cos(), t.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::MultiPolyQ;

    fn n() -> MultiPolyQ {
        MultiPolyQ::var(1, 0)
    }

    fn z() -> MultiPolyQ {
        MultiPolyQ::zero(1)
    }

    fn int_rows(rows: &[&[i64]]) -> Vec<Vec<Integer>> {
        rows.iter().map(|r| r.iter().map(|&v| Integer::from(v)).collect()).collect()
    }

    #[test]
    fn line_in_torus() {
        let u = PolynomialTorusSequence::from_parts(vec![vec![z(), n()], vec![z(), n().scale(&rat(2, 1))]]);
        let c = orbit_closure(&u).unwrap();
        assert_eq!(c.subspace_basis(), int_rows(&[&[1, 2]]).as_slice());
        assert_eq!(c.cosets().len(), 1);
        assert!(c.annihilates(&[2, -1]));
        assert!(c.constant_on_cosets(&[2, -1]));
    }

    #[test]
    fn full_torus() {
        let u = PolynomialTorusSequence::from_parts(vec![vec![z(), n()], vec![z(), n().pow(2)]]);
        let c = orbit_closure(&u).unwrap();
        assert!(c.is_full_torus());
        assert_eq!(c.subspace_basis(), int_rows(&[&[1, 0], &[0, 1]]).as_slice());
    }

    #[test]
    fn half_steps() {
        let x = MultiPolyQ::constant(1, rat(1, 7));
        let u = PolynomialTorusSequence::from_parts(vec![vec![x.add(&n().scale(&rat(1, 2)))]]);
        let c = orbit_closure(&u).unwrap();
        assert_eq!(c.subspace_dim(), 0);
        assert_eq!(c.modulus(), &[2]);
        assert_eq!(c.cosets().len(), 2);
        assert_eq!(c.cosets()[1].offset[0], SymbolicReal::rational(rat(1, 7) + rat(1, 2)));
        assert!(c.constant_on_cosets(&[2]));
        assert!(!c.constant_on_cosets(&[1]));
        let g = Generators::default();
        assert!(c.predicted_average(&[1], &g).norm() < 1e-15);
    }

    #[test]
    fn cosets_merge_modulo_v() {
        // V = span{(1,1)}; the step (1/2, 0) leaves V, the step (1/2, 1/2) does not
        let u = PolynomialTorusSequence::from_parts(vec![
            vec![n().scale(&rat(1, 2)), n()],
            vec![z(), n()],
        ]);
        assert_eq!(orbit_closure(&u).unwrap().cosets().len(), 2);
        let u = PolynomialTorusSequence::from_parts(vec![
            vec![n().scale(&rat(1, 2)), n()],
            vec![n().scale(&rat(1, 2)), n()],
        ]);
        assert_eq!(orbit_closure(&u).unwrap().cosets().len(), 1);
    }
}
