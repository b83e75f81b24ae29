//! Commuting unipotent affine maps `x ↦ Ax + t` on `T^m` and closed-form
//! polynomial orbits.

use super::symbolic::{matrix_apply, matrix_apply_real, SymPoly, SymbolicReal};
use super::{PolynomialTorusSequence, TorusError};
use crate::intpoly::is_integer_valued;
use crate::linalg::Matrix;
use crate::{Integer, MultiPolyQ, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineUnipotentMap {
    a: Matrix<Integer>,
    t: Vec<SymbolicReal>,
}

fn is_unipotent_int(a: &Matrix<Integer>) -> bool {
    let m = a.rows();
    let n = a.minus_identity();
    n.pow(m as u32).is_zero_matrix()
}

impl AffineUnipotentMap {
    pub fn new(a: Matrix<Integer>, t: Vec<SymbolicReal>) -> Result<Self, TorusError> {
        if !a.is_square() || a.rows() != t.len() || a.rows() == 0 {
            return Err(TorusError::DimensionMismatch);
        }
        if !is_unipotent_int(&a) {
            return Err(TorusError::NotUnipotent);
        }
        Ok(AffineUnipotentMap { a, t })
    }

    pub fn from_i64(a: &[&[i64]], t: Vec<SymbolicReal>) -> Result<Self, TorusError> {
        let rows = a.iter().map(|r| r.iter().map(|&v| Integer::from(v)).collect()).collect();
        Self::new(Matrix::from_rows(rows), t)
    }

    /// `x ↦ x + t`.
    pub fn translation(t: Vec<SymbolicReal>) -> Self {
        AffineUnipotentMap {
            a: Matrix::identity(t.len()),
            t,
        }
    }

    pub fn dim(&self) -> usize {
        self.t.len()
    }

    pub fn matrix(&self) -> &Matrix<Integer> {
        &self.a
    }

    pub fn translation_part(&self) -> &[SymbolicReal] {
        &self.t
    }

    pub fn apply(&self, x: &[SymbolicReal]) -> Vec<SymbolicReal> {
        matrix_apply_real(&self.a, x)
            .into_iter()
            .zip(&self.t)
            .map(|(v, t)| v.add(t))
            .collect()
    }

    pub fn apply_inverse(&self, x: &[SymbolicReal]) -> Vec<SymbolicReal> {
        let inv = self
            .a
            .map(|v| Rational::from_integer(v.clone()))
            .inverse()
            .expect("unipotent")
            .map(|v| v.to_integer());
        let shifted: Vec<SymbolicReal> = x.iter().zip(&self.t).map(|(v, t)| v.sub(t)).collect();
        matrix_apply_real(&inv, &shifted)
    }

    /// `T^k x` by repeated application.
    pub fn iterate(&self, x: &[SymbolicReal], k: i64) -> Vec<SymbolicReal> {
        let mut y = x.to_vec();
        for _ in 0..k.unsigned_abs() {
            y = if k > 0 { self.apply(&y) } else { self.apply_inverse(&y) };
        }
        y
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        if self.a.mul(&other.a) != other.a.mul(&self.a) {
            return false;
        }
        let lhs = matrix_apply_real(&self.a.minus_identity(), &other.t);
        let rhs = matrix_apply_real(&other.a.minus_identity(), &self.t);
        lhs.iter().zip(&rhs).all(|(a, b)| a.eq_mod1(b))
    }
}

/// `C(p, j)` as a polynomial.
fn binomial_of_poly(p: &MultiPolyQ, j: u32) -> MultiPolyQ {
    let nvars = p.nvars();
    let mut acc = MultiPolyQ::one(nvars);
    for i in 0..j {
        let factor = p.sub(&MultiPolyQ::constant(nvars, Rational::from_integer(i.into())));
        acc = acc.mul(&factor).scale(&Rational::new(1.into(), (i + 1).into()));
    }
    acc
}

/// `T^{p(n)}` applied to a symbolic vector, via
/// `A^k = Σ_j C(k, j) N^j` and `Σ_{i<k} A^i = Σ_j C(k, j+1) N^j`.
fn apply_power(map: &AffineUnipotentMap, p: &MultiPolyQ, x: &[SymPoly]) -> Vec<SymPoly> {
    let m = map.dim();
    let (nvars, ngens) = (x[0].nvars(), x[0].ngens());
    let nil = map.a.minus_identity();
    let t: Vec<SymPoly> = map.t.iter().map(|c| SymPoly::constant(nvars, ngens, c)).collect();
    let mut out = vec![SymPoly::zero(nvars, ngens); m];
    let mut nx = x.to_vec();
    let mut nt = t;
    for j in 0..=m as u32 {
        let cj = binomial_of_poly(p, j);
        let cj1 = binomial_of_poly(p, j + 1);
        for i in 0..m {
            out[i] = out[i].add(&nx[i].mul_poly(&cj)).add(&nt[i].mul_poly(&cj1));
        }
        nx = matrix_apply(&nil, &nx);
        nt = matrix_apply(&nil, &nt);
    }
    out
}

/// A family of pairwise commuting unipotent affine maps on `T^m` over
/// `ngens` declared generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSystem {
    maps: Vec<AffineUnipotentMap>,
    ngens: usize,
}

impl AffineSystem {
    pub fn new(maps: Vec<AffineUnipotentMap>, ngens: usize) -> Result<Self, TorusError> {
        let Some(first) = maps.first() else {
            return Err(TorusError::DimensionMismatch);
        };
        let m = first.dim();
        for map in &maps {
            if map.dim() != m {
                return Err(TorusError::DimensionMismatch);
            }
            if map.t.iter().flat_map(|c| c.terms()).any(|(i, _)| i >= ngens) {
                return Err(TorusError::UnknownGenerator);
            }
        }
        for (i, a) in maps.iter().enumerate() {
            for b in &maps[i + 1..] {
                if !a.commutes_with(b) {
                    return Err(TorusError::NonCommuting);
                }
            }
        }
        Ok(AffineSystem { maps, ngens })
    }

    pub fn maps(&self) -> &[AffineUnipotentMap] {
        &self.maps
    }

    pub fn dim(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// `∏_j T_j^{k_j} x` by iteration.
    pub fn iterate(&self, x: &[SymbolicReal], exponents: &[i64]) -> Vec<SymbolicReal> {
        self.maps
            .iter()
            .zip(exponents)
            .fold(x.to_vec(), |y, (map, &k)| map.iterate(&y, k))
    }
}

/// Exact polynomial form of `n ↦ ∏_j T_j^{p_j(n)} x`.
pub fn closed_form_orbit(
    system: &AffineSystem,
    exponents: &[MultiPolyQ],
    x: &[SymbolicReal],
) -> Result<PolynomialTorusSequence, TorusError> {
    if exponents.len() != system.maps.len() || x.len() != system.dim() {
        return Err(TorusError::DimensionMismatch);
    }
    let nvars = exponents[0].nvars();
    if exponents.iter().any(|p| p.nvars() != nvars) {
        return Err(TorusError::DimensionMismatch);
    }
    if let Some(i) = exponents.iter().position(|p| !is_integer_valued(p)) {
        return Err(TorusError::ExponentNotIntegerValued(i));
    }
    let mut u: Vec<SymPoly> = x.iter().map(|c| SymPoly::constant(nvars, system.ngens, c)).collect();
    for (map, p) in system.maps.iter().zip(exponents) {
        if p.is_zero() {
            continue;
        }
        u = apply_power(map, p, &u);
    }
    Ok(PolynomialTorusSequence::new(u))
}

/// `p_j(n)` for integer-valued exponent polynomials.
pub fn exponent_values(exponents: &[MultiPolyQ], n: &[i64]) -> Vec<i64> {
    let pt: Vec<Rational> = n.iter().map(|&v| Rational::from_integer(v.into())).collect();
    exponents
        .iter()
        .map(|p| {
            let v = p.eval(&pt);
            assert!(v.is_integer());
            i64::try_from(v.to_integer()).expect("exponent fits in i64")
        })
        .collect()
}
