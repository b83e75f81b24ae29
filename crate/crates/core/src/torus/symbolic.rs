//! Reals of the form `q + Σ c_i α_i` over declared irrational generators,
//! and polynomials in `n ∈ Z^d` with such coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::quadratic::Quadratic;
use crate::scalar::{floor_rat, parse_rational, rat_to_f64};
use crate::{Integer, MultiPolyQ, QuadraticQ, Rational};

/// `q_0 + Σ_i c_i α_i`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SymbolicReal {
    q0: Rational,
    terms: BTreeMap<usize, Rational>,
}

impl SymbolicReal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(q: Rational) -> Self {
        SymbolicReal {
            q0: q,
            terms: BTreeMap::new(),
        }
    }

    /// `c · α_i`.
    pub fn generator(i: usize, c: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(i, c);
        s
    }

    pub fn new(q0: Rational, terms: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut s = Self::rational(q0);
        for (i, c) in terms {
            s.add_term(i, c);
        }
        s
    }

    fn add_term(&mut self, i: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(i).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&i);
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.q0
    }

    pub fn coefficient(&self, i: usize) -> Rational {
        self.terms.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.q0.is_zero() && self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.q0 += other.q0.clone();
        for (i, c) in &other.terms {
            out.add_term(*i, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        SymbolicReal {
            q0: self.q0.clone() * k.clone(),
            terms: self.terms.iter().map(|(i, c)| (*i, c.clone() * k.clone())).collect(),
        }
    }

    /// Representative with rational part in `[0, 1)`.
    pub fn reduce_mod1(&self) -> Self {
        let mut out = self.clone();
        out.q0 -= Rational::from_integer(floor_rat(&self.q0));
        out
    }

    /// Equality in `R / Z`, valid when the generators are rationally
    /// independent irrationals.
    pub fn eq_mod1(&self, other: &Self) -> bool {
        let d = self.sub(other);
        d.terms.is_empty() && d.q0.is_integer()
    }

    pub fn to_f64(&self, gens: &Generators) -> f64 {
        rat_to_f64(&self.q0)
            + self
                .terms
                .iter()
                .map(|(i, c)| rat_to_f64(c) * gens.get(*i).value.to_f64())
                .sum::<f64>()
    }

    /// Fractional part as a fixed-point fraction of a turn.
    pub fn to_phase(&self, gens: &Generators) -> Phase {
        let mut p = Phase::from_rational(&self.q0);
        for (i, c) in &self.terms {
            p = p + Phase::from_quadratic(&gens.get(*i).value.scale(c));
        }
        p
    }

    pub fn parse(rational: &str, coefficients: &[String]) -> Option<Self> {
        let q0 = parse_rational(rational)?;
        let terms = coefficients
            .iter()
            .enumerate()
            .map(|(i, s)| parse_rational(s).map(|c| (i, c)))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::new(q0, terms))
    }
}

impl fmt::Display for SymbolicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q0)?;
        for (i, c) in &self.terms {
            write!(f, " + {c}*a{}", i + 1)?;
        }
        Ok(())
    }
}

/// Scenario-file form of a [`SymbolicReal`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicRealText {
    #[serde(default = "zero_text")]
    pub rational: String,
    #[serde(default)]
    pub generators: Vec<String>,
}

fn zero_text() -> String {
    "0".into()
}

/// Element of `R/Z` as `k / 2^128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(pub u128);

impl Phase {
    fn from_floor_scaled(v: BigInt) -> Phase {
        // v mod 2^128, taken non-negative
        let modulus = BigInt::one() << 128;
        let r: BigInt = ((v % &modulus) + &modulus) % &modulus;
        let (_, digits) = r.to_u64_digits();
        let lo = digits.first().copied().unwrap_or(0) as u128;
        let hi = digits.get(1).copied().unwrap_or(0) as u128;
        Phase(lo | (hi << 64))
    }

    pub fn from_rational(q: &Rational) -> Phase {
        let scaled = q.clone() * Rational::from_integer(BigInt::one() << 128);
        Self::from_floor_scaled(floor_rat(&scaled))
    }

    pub fn from_quadratic(x: &QuadraticQ) -> Phase {
        let scaled = x.scale(&Rational::from_integer(BigInt::one() << 128));
        Self::from_floor_scaled(scaled.floor())
    }

    /// `k · self` in `R/Z` for an integer `k` given modulo `2^128`.
    pub fn times(self, k: u128) -> Phase {
        Phase(self.0.wrapping_mul(k))
    }

    pub fn turns(self) -> f64 {
        self.0 as f64 * 2f64.powi(-128)
    }

    /// Distance to the nearest integer, in turns.
    pub fn distance_to_zero(self) -> f64 {
        let t = self.turns();
        t.min(1.0 - t)
    }
}

impl std::ops::Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase(self.0.wrapping_add(rhs.0))
    }
}

impl std::ops::Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase(self.0.wrapping_sub(rhs.0))
    }
}

/// A declared irrational generator with an exact quadratic value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub value: QuadraticQ,
}

impl Generator {
    /// `(a + b√D)`; `None` when the value is rational.
    pub fn quadratic(name: &str, a: Rational, b: Rational, radicand: i64) -> Option<Self> {
        if b.is_zero() || radicand <= 0 || is_square(radicand) {
            return None;
        }
        Some(Generator {
            name: name.into(),
            value: Quadratic::new(a, b, BigInt::from(radicand)),
        })
    }

    pub fn sqrt(n: i64) -> Option<Self> {
        Self::quadratic(&format!("sqrt{n}"), Rational::zero(), Rational::one(), n)
    }

    pub fn golden() -> Self {
        let half = Rational::new(1.into(), 2.into());
        Self::quadratic("golden", half.clone(), half, 5).expect("irrational")
    }
}

fn is_square(n: i64) -> bool {
    let r = (n as f64).sqrt().round() as i64;
    (r - 1..=r + 1).any(|s| s >= 0 && s * s == n)
}

/// Generators `α_1, …, α_r`, assumed rationally independent.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Generators {
    list: Vec<Generator>,
}

impl Generators {
    pub fn new(list: Vec<Generator>) -> Self {
        Generators { list }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.list[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.list.iter()
    }

    /// Resolves a preset name: `sqrtN`, `golden`.
    pub fn preset(name: &str) -> Option<Generator> {
        if name == "golden" {
            return Some(Generator::golden());
        }
        name.strip_prefix("sqrt")?.parse().ok().and_then(Generator::sqrt)
    }
}

/// Polynomial in `n ∈ Z^d` with coefficients in `Q + Σ Q α_i`, stored as
/// one rational polynomial per component: index 0 is the rational part,
/// index `i + 1` the coefficient of `α_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    nvars: usize,
    parts: Vec<MultiPolyQ>,
}

impl SymPoly {
    pub fn zero(nvars: usize, ngens: usize) -> Self {
        SymPoly {
            nvars,
            parts: vec![MultiPolyQ::zero(nvars); ngens + 1],
        }
    }

    pub fn constant(nvars: usize, ngens: usize, c: &SymbolicReal) -> Self {
        let mut s = Self::zero(nvars, ngens);
        s.parts[0] = MultiPolyQ::constant(nvars, c.q0.clone());
        for (i, v) in &c.terms {
            assert!(*i < ngens, "generator index {i} out of range");
            s.parts[i + 1] = MultiPolyQ::constant(nvars, v.clone());
        }
        s
    }

    pub fn from_parts(parts: Vec<MultiPolyQ>) -> Self {
        let nvars = parts.first().map_or(0, MultiPolyQ::nvars);
        SymPoly { nvars, parts }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ngens(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn rational_part(&self) -> &MultiPolyQ {
        &self.parts[0]
    }

    /// Coefficient polynomial of `α_i`.
    pub fn generator_part(&self, i: usize) -> &MultiPolyQ {
        &self.parts[i + 1]
    }

    pub fn parts(&self) -> &[MultiPolyQ] {
        &self.parts
    }

    pub fn add(&self, other: &Self) -> Self {
        SymPoly {
            nvars: self.nvars,
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn mul_poly(&self, p: &MultiPolyQ) -> Self {
        SymPoly {
            nvars: self.nvars,
            parts: self.parts.iter().map(|a| a.mul(p)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        SymPoly {
            nvars: self.nvars,
            parts: self.parts.iter().map(|a| a.scale(k)).collect(),
        }
    }

    pub fn compose(&self, polys: &[MultiPolyQ]) -> Self {
        SymPoly::from_parts(self.parts.iter().map(|a| a.compose(polys)).collect())
    }

    pub fn eval(&self, n: &[Rational]) -> SymbolicReal {
        SymbolicReal::new(
            self.parts[0].eval(n),
            self.parts[1..].iter().enumerate().map(|(i, p)| (i, p.eval(n))),
        )
    }

    pub fn eval_int(&self, n: &[i64]) -> SymbolicReal {
        let pt: Vec<Rational> = n.iter().map(|&v| Rational::from_integer(v.into())).collect();
        self.eval(&pt)
    }

    pub fn constant_term(&self) -> SymbolicReal {
        self.eval(&vec![Rational::zero(); self.nvars])
    }

    /// Coefficients grouped by monomial, for fast phase evaluation.
    pub fn coefficients(&self) -> BTreeMap<Vec<u32>, SymbolicReal> {
        let mut out: BTreeMap<Vec<u32>, SymbolicReal> = BTreeMap::new();
        for (k, part) in self.parts.iter().enumerate() {
            for (e, c) in part.terms() {
                let slot = out.entry(e.clone()).or_default();
                if k == 0 {
                    slot.q0 += c.clone();
                } else {
                    slot.add_term(k - 1, c.clone());
                }
            }
        }
        out
    }
}

/// `M · v` for an integer matrix and a vector of symbolic polynomials.
pub fn matrix_apply(m: &Matrix<Integer>, v: &[SymPoly]) -> Vec<SymPoly> {
    let (nvars, ngens) = (v[0].nvars, v[0].ngens());
    (0..m.rows())
        .map(|i| {
            (0..m.cols()).fold(SymPoly::zero(nvars, ngens), |acc, j| {
                let a = &m[(i, j)];
                if a.is_zero() {
                    acc
                } else {
                    acc.add(&v[j].scale(&Rational::from_integer(a.clone())))
                }
            })
        })
        .collect()
}

/// `M · v` for an integer matrix and a vector of symbolic reals.
pub fn matrix_apply_real(m: &Matrix<Integer>, v: &[SymbolicReal]) -> Vec<SymbolicReal> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols()).fold(SymbolicReal::zero(), |acc, j| {
                acc.add(&v[j].scale(&Rational::from_integer(m[(i, j)].clone())))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn representation_is_unique() {
        let a = SymbolicReal::new(rat(1, 2), [(0, rat(1, 1)), (1, rat(0, 1))]);
        let b = SymbolicReal::generator(0, rat(2, 1)).sub(&SymbolicReal::generator(0, rat(1, 1)));
        assert_eq!(a.sub(&b), SymbolicReal::rational(rat(1, 2)));
        assert!(a.sub(&a).is_zero());
        assert!(a.eq_mod1(&a.add(&SymbolicReal::rational(rat(3, 1)))));
    }

    #[test]
    fn phase_of_sqrt2() {
        let g = Generators::new(vec![Generator::sqrt(2).unwrap()]);
        let p = SymbolicReal::generator(0, rat(1, 1)).to_phase(&g);
        assert!((p.turns() - (std::f64::consts::SQRT_2 - 1.0)).abs() < 1e-15);
        // 10^6 √2 mod 1 matches the exact fixed-point product
        let direct = SymbolicReal::generator(0, rat(1_000_000, 1)).to_phase(&g);
        let times = p.times(1_000_000);
        assert!((direct.0 as i128 - times.0 as i128).unsigned_abs() < 1 << 24);
        assert_eq!(Phase::from_rational(&rat(-1, 4)), Phase(3 << 126));
    }

    #[test]
    fn presets() {
        assert!(Generators::preset("sqrt3").is_some());
        assert!(Generators::preset("sqrt4").is_none());
        assert!((Generators::preset("golden").unwrap().value.to_f64() - 1.618033988749895).abs() < 1e-15);
    }

    #[test]
    fn sympoly_coefficients_roundtrip() {
        let n = MultiPolyQ::var(1, 0);
        let s = SymPoly::from_parts(vec![n.scale(&rat(1, 2)), n.pow(2)]);
        let c = s.coefficients();
        assert_eq!(c[&vec![1]], SymbolicReal::rational(rat(1, 2)));
        assert_eq!(c[&vec![2]], SymbolicReal::generator(0, rat(1, 1)));
        assert_eq!(s.eval_int(&[3]), SymbolicReal::new(rat(3, 2), [(0, rat(9, 1))]));
    }
}
