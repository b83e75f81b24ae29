//! Polynomial sequences `u: Z^d → T^m` with symbolic coefficients.

use num_traits::Zero;

use super::symbolic::{Generators, Phase, SymPoly, SymbolicReal};
use crate::{Integer, MultiPolyQ, Rational};

/// `u(n) = u(0) + u_0(n) + Σ_i u_i(n) α_i`, one [`SymPoly`] per torus
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialTorusSequence {
    coords: Vec<SymPoly>,
}

impl PolynomialTorusSequence {
    pub fn new(coords: Vec<SymPoly>) -> Self {
        assert!(!coords.is_empty());
        PolynomialTorusSequence { coords }
    }

    /// Builds a sequence from per-coordinate rational parts and per-generator
    /// coefficient polynomials: `parts[k][0]` rational, `parts[k][i+1]` for `α_i`.
    pub fn from_parts(parts: Vec<Vec<MultiPolyQ>>) -> Self {
        Self::new(parts.into_iter().map(SymPoly::from_parts).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn nvars(&self) -> usize {
        self.coords[0].nvars()
    }

    pub fn ngens(&self) -> usize {
        self.coords[0].ngens()
    }

    pub fn coords(&self) -> &[SymPoly] {
        &self.coords
    }

    pub fn eval(&self, n: &[i64]) -> Vec<SymbolicReal> {
        self.coords.iter().map(|c| c.eval_int(n)).collect()
    }

    pub fn base_point(&self) -> Vec<SymbolicReal> {
        self.coords.iter().map(SymPoly::constant_term).collect()
    }

    /// `u_0`: the rational part without its constant term.
    pub fn rational_part(&self) -> Vec<MultiPolyQ> {
        self.coords
            .iter()
            .map(|c| {
                let r = c.rational_part();
                r.sub(&MultiPolyQ::constant(r.nvars(), r.constant_term()))
            })
            .collect()
    }

    /// `u_i`: the coefficient of `α_i` without its constant term.
    pub fn generator_part(&self, i: usize) -> Vec<MultiPolyQ> {
        self.coords
            .iter()
            .map(|c| {
                let r = c.generator_part(i);
                r.sub(&MultiPolyQ::constant(r.nvars(), r.constant_term()))
            })
            .collect()
    }

    /// `n ↦ u(n + s)`.
    pub fn shift(&self, s: &[i64]) -> Self {
        let d = self.nvars();
        let subs: Vec<MultiPolyQ> = (0..d)
            .map(|j| MultiPolyQ::var(d, j).add(&MultiPolyQ::constant(d, Rational::from_integer(s[j].into()))))
            .collect();
        Self::new(self.coords.iter().map(|c| c.compose(&subs)).collect())
    }

    /// `c · u(n)` as a scalar symbolic polynomial.
    pub fn character_phase(&self, c: &[i64]) -> SymPoly {
        assert_eq!(c.len(), self.dim());
        let zero = SymPoly::zero(self.nvars(), self.ngens());
        c.iter().zip(&self.coords).fold(zero, |acc, (&k, u)| {
            if k == 0 {
                acc
            } else {
                acc.add(&u.scale(&Rational::from_integer(k.into())))
            }
        })
    }
}

/// Fast evaluator for `n ↦ p(n) mod 1` in fixed point.
#[derive(Clone, Debug)]
pub struct PhasePolynomial {
    terms: Vec<(Vec<u32>, Phase)>,
    constant: Phase,
}

impl PhasePolynomial {
    pub fn new(p: &SymPoly, gens: &Generators) -> Self {
        let mut terms = Vec::new();
        let mut constant = Phase::default();
        for (e, c) in p.coefficients() {
            let ph = c.to_phase(gens);
            if e.iter().all(|&k| k == 0) {
                constant = ph;
            } else {
                terms.push((e, ph));
            }
        }
        PhasePolynomial { terms, constant }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(_, p)| p.0 == 0)
    }

    pub fn eval(&self, n: &[i64]) -> Phase {
        let mut acc = self.constant;
        for (e, c) in &self.terms {
            let mut m: u128 = 1;
            for (&k, &x) in e.iter().zip(n) {
                let xw = x as i128 as u128;
                for _ in 0..k {
                    m = m.wrapping_mul(xw);
                }
            }
            acc = acc + c.times(m);
        }
        acc
    }
}

pub(crate) fn integer_vector(v: &[Rational]) -> Vec<Integer> {
    let l = crate::scalar::denominator_lcm(v.iter());
    v.iter()
        .map(|q| (q.clone() * Rational::from_integer(l.clone())).to_integer())
        .collect()
}

pub(crate) fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}
