//! Exact arithmetic in a number field `K = Q[x]/(f)` and its ring of
//! integers, using the power basis `1, θ, ..., θ^(d-1)` as integral basis.

mod irreducible;
mod subgroup;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::{Integer, QMatrix, QPoly, Rational};

pub use irreducible::{find_irreducibility_prime, small_primes, MAX_CERTIFICATE_PRIME};
pub use subgroup::PrincipalSubgroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("defining polynomial is not monic")]
    NotMonic,
    #[error("defining polynomial must have degree at least 1")]
    ZeroDegree,
    #[error("no irreducibility certificate modulo primes <= {MAX_CERTIFICATE_PRIME}")]
    NotIrreducible,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("element has {got} coordinates, field has degree {expected}")]
    WrongDimension { expected: usize, got: usize },
    #[error("operation undefined for the zero element")]
    ZeroInput,
    #[error("zero does not generate a finite-index subgroup")]
    ZeroDivisor,
    #[error("element is not an algebraic integer")]
    NotIntegral,
}

/// Identity of a field, derived from its defining polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldId(u64);

impl FieldId {
    fn of(min_poly: &[Integer]) -> Self {
        // FNV-1a over the decimal coefficients
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for c in min_poly {
            for b in c.to_string().bytes().chain(std::iter::once(b',')) {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        FieldId(h)
    }
}

/// Serialized form `{min_poly = [c_0, ..., c_{d-1}, 1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpecText {
    pub min_poly: Vec<i64>,
    #[serde(default)]
    pub assert_irreducible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    min_poly: Vec<Integer>,
    degree: usize,
    /// `a[(j * d + l) * d + m]` with `b_j b_l = Σ_m a_{j,l,m} b_m`.
    structure: Vec<Integer>,
    certificate_prime: Option<u64>,
    id: FieldId,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicNumber {
    coords: Vec<Rational>,
    field: FieldId,
}

/// An element of `O_K`: integer coordinates over the integral basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicInteger(AlgebraicNumber);

/// Matrix of `x ↦ αx` on the coordinate space, column `m` = coords(α b_m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultMatrix(pub QMatrix);

impl NumberField {
    /// Builds the field of a monic integer polynomial given lowest
    /// coefficient first. Irreducibility must be certified modulo a small
    /// prime unless `assert_irreducible` is set.
    pub fn new(min_poly: &[Integer], assert_irreducible: bool) -> Result<Self, RingError> {
        let mut coeffs = min_poly.to_vec();
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(RingError::ZeroDegree);
        }
        if !coeffs.last().unwrap().is_one() {
            return Err(RingError::NotMonic);
        }
        let d = coeffs.len() - 1;
        let certificate_prime = find_irreducibility_prime(&coeffs);
        if certificate_prime.is_none() && !assert_irreducible {
            return Err(RingError::NotIrreducible);
        }
        // powers θ^k reduced modulo f for k <= 2d - 2
        let mut powers: Vec<Vec<Integer>> = Vec::with_capacity(2 * d - 1);
        let mut cur = vec![Integer::zero(); d];
        cur[0] = Integer::one();
        for _ in 0..(2 * d - 1) {
            powers.push(cur.clone());
            let carry = cur[d - 1].clone();
            let mut next = vec![Integer::zero(); d];
            for i in (1..d).rev() {
                next[i] = cur[i - 1].clone();
            }
            for (i, n) in next.iter_mut().enumerate() {
                *n -= &carry * &coeffs[i];
            }
            cur = next;
        }
        let mut structure = Vec::with_capacity(d * d * d);
        for j in 0..d {
            for l in 0..d {
                structure.extend(powers[j + l].iter().cloned());
            }
        }
        let id = FieldId::of(&coeffs);
        Ok(NumberField {
            min_poly: coeffs,
            degree: d,
            structure,
            certificate_prime,
            id,
        })
    }

    pub fn from_i64s(min_poly: &[i64]) -> Result<Self, RingError> {
        let cs: Vec<Integer> = min_poly.iter().map(|&c| Integer::from(c)).collect();
        Self::new(&cs, false)
    }

    pub fn from_spec(spec: &FieldSpecText) -> Result<Self, RingError> {
        let cs: Vec<Integer> = spec.min_poly.iter().map(|&c| Integer::from(c)).collect();
        Self::new(&cs, spec.assert_irreducible)
    }

    pub fn to_spec(&self) -> FieldSpecText {
        FieldSpecText {
            min_poly: self
                .min_poly
                .iter()
                .map(|c| i64::try_from(c).expect("coefficient fits i64"))
                .collect(),
            assert_irreducible: self.certificate_prime.is_none(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn id(&self) -> FieldId {
        self.id
    }

    pub fn min_poly(&self) -> &[Integer] {
        &self.min_poly
    }

    /// Prime modulo which the defining polynomial was certified irreducible.
    pub fn certificate_prime(&self) -> Option<u64> {
        self.certificate_prime
    }

    /// Structure constant `a_{j,l,m}` (0-based indices).
    pub fn structure_constant(&self, j: usize, l: usize, m: usize) -> &Integer {
        let d = self.degree;
        &self.structure[(j * d + l) * d + m]
    }

    // -- element construction ------------------------------------------------

    pub fn element(&self, coords: Vec<Rational>) -> Result<AlgebraicNumber, RingError> {
        if coords.len() != self.degree {
            return Err(RingError::WrongDimension {
                expected: self.degree,
                got: coords.len(),
            });
        }
        Ok(AlgebraicNumber {
            coords,
            field: self.id,
        })
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<AlgebraicNumber, RingError> {
        self.element(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn integer(&self, coords: &[Integer]) -> Result<AlgebraicInteger, RingError> {
        let a = self.element(coords.iter().cloned().map(Rational::from_integer).collect())?;
        Ok(AlgebraicInteger(a))
    }

    pub fn integer_i64(&self, coords: &[i64]) -> Result<AlgebraicInteger, RingError> {
        self.element_i64(coords).map(AlgebraicInteger)
    }

    pub fn from_rational(&self, q: Rational) -> AlgebraicNumber {
        let mut coords = vec![Rational::zero(); self.degree];
        coords[0] = q;
        AlgebraicNumber {
            coords,
            field: self.id,
        }
    }

    pub fn zero(&self) -> AlgebraicNumber {
        self.from_rational(Rational::zero())
    }

    pub fn one(&self) -> AlgebraicNumber {
        self.from_rational(Rational::one())
    }

    /// The basis element `b_i` (0-based).
    pub fn basis(&self, i: usize) -> AlgebraicNumber {
        let mut coords = vec![Rational::zero(); self.degree];
        coords[i] = Rational::one();
        AlgebraicNumber {
            coords,
            field: self.id,
        }
    }

    pub fn check(&self, a: &AlgebraicNumber) -> Result<(), RingError> {
        if a.field != self.id {
            return Err(RingError::FieldMismatch);
        }
        Ok(())
    }

    // -- arithmetic ------------------------------------------------------------

    pub fn add(&self, a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<AlgebraicNumber, RingError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub fn sub(&self, a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<AlgebraicNumber, RingError> {
        self.check(a)?;
        self.check(b)?;
        Ok(AlgebraicNumber {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
            field: self.id,
        })
    }

    pub fn mul(&self, a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<AlgebraicNumber, RingError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
        AlgebraicNumber {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
            field: self.id,
        }
    }

    pub(crate) fn mul_unchecked(&self, a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
        let d = self.degree;
        let mut out = vec![Rational::zero(); d];
        for (j, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (l, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (m, o) in out.iter_mut().enumerate() {
                    let s = self.structure_constant(j, l, m);
                    if !s.is_zero() {
                        *o += &xy * Rational::from_integer(s.clone());
                    }
                }
            }
        }
        AlgebraicNumber {
            coords: out,
            field: self.id,
        }
    }

    pub fn scale(&self, a: &AlgebraicNumber, q: &Rational) -> AlgebraicNumber {
        AlgebraicNumber {
            coords: a.coords.iter().map(|x| x * q).collect(),
            field: a.field,
        }
    }

    pub fn pow(&self, a: &AlgebraicNumber, k: u32) -> Result<AlgebraicNumber, RingError> {
        self.check(a)?;
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul_unchecked(&acc, a);
        }
        Ok(acc)
    }

    pub fn mult_matrix(&self, a: &AlgebraicNumber) -> Result<MultMatrix, RingError> {
        self.check(a)?;
        let cols: Vec<Vec<Rational>> = (0..self.degree)
            .map(|m| self.mul_unchecked(a, &self.basis(m)).coords)
            .collect();
        Ok(MultMatrix(Matrix::from_columns(&cols)))
    }

    /// Absolute norm `N(α) = det M_α`.
    pub fn norm(&self, a: &AlgebraicNumber) -> Result<Rational, RingError> {
        Ok(self.mult_matrix(a)?.0.det())
    }

    pub fn inverse(&self, a: &AlgebraicNumber) -> Result<AlgebraicNumber, RingError> {
        let m = self.mult_matrix(a)?;
        if m.0.det().is_zero() {
            return Err(RingError::ZeroInput);
        }
        let x = m.0.solve(&self.one().coords).ok_or(RingError::ZeroInput)?;
        self.element(x)
    }

    /// Minimal polynomial of `α` over Q: the squarefree part of the
    /// characteristic polynomial of `M_α`.
    pub fn min_poly_of(&self, a: &AlgebraicNumber) -> Result<QPoly, RingError> {
        Ok(self.mult_matrix(a)?.0.charpoly().squarefree_part())
    }

    /// Whether `α` has two conjugates `β, -β`: `m(x)` and `m(-x)` share a root.
    pub fn conjugates_negate(&self, a: &AlgebraicNumber) -> Result<bool, RingError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(RingError::ZeroInput);
        }
        let m = self.min_poly_of(a)?;
        let g = m.gcd(&m.reflect());
        Ok(!g.is_constant())
    }

    pub fn subgroup(&self, r: &AlgebraicInteger) -> Result<PrincipalSubgroup, RingError> {
        PrincipalSubgroup::new(self, r)
    }

    pub fn subgroup_membership(&self, n: &AlgebraicInteger, r: &AlgebraicInteger) -> Result<bool, RingError> {
        let s = self.subgroup(r)?;
        s.contains(self, n)
    }

    /// A complete system of representatives of `O_K / rO_K`.
    pub fn residues(&self, r: &AlgebraicInteger) -> Result<Vec<AlgebraicInteger>, RingError> {
        Ok(self.subgroup(r)?.residues(self))
    }

    pub fn to_integer(&self, a: &AlgebraicNumber) -> Result<AlgebraicInteger, RingError> {
        self.check(a)?;
        AlgebraicInteger::try_from(a.clone())
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = Poly::new(self.min_poly.iter().cloned().map(Rational::from_integer).collect());
        write!(f, "Q[x]/({p})")
    }
}

impl AlgebraicNumber {
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn field_id(&self) -> FieldId {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn neg(&self) -> Self {
        AlgebraicNumber {
            coords: self.coords.iter().map(|c| -c).collect(),
            field: self.field,
        }
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> Integer {
        self.coords
            .iter()
            .fold(Integer::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl AlgebraicInteger {
    pub fn as_number(&self) -> &AlgebraicNumber {
        &self.0
    }

    pub fn into_number(self) -> AlgebraicNumber {
        self.0
    }

    pub fn coords(&self) -> Vec<Integer> {
        self.0.coords.iter().map(|c| c.to_integer()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Max-norm of the coordinate vector.
    pub fn height(&self) -> Integer {
        self.coords().iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl TryFrom<AlgebraicNumber> for AlgebraicInteger {
    type Error = RingError;
    fn try_from(a: AlgebraicNumber) -> Result<Self, RingError> {
        if a.is_integral() {
            Ok(AlgebraicInteger(a))
        } else {
            Err(RingError::NotIntegral)
        }
    }
}

impl From<AlgebraicInteger> for AlgebraicNumber {
    fn from(a: AlgebraicInteger) -> Self {
        a.0
    }
}

impl fmt::Display for AlgebraicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl MultMatrix {
    pub fn apply(&self, b: &AlgebraicNumber) -> Vec<Rational> {
        self.0.mul_vec(&b.coords)
    }

    /// Entries as integers, when `α` is integral.
    pub fn to_integer_matrix(&self) -> Option<Matrix<Integer>> {
        if (0..self.0.rows()).all(|i| self.0.row(i).iter().all(|c| c.is_integer())) {
            Some(self.0.map(|c| c.to_integer()))
        } else {
            None
        }
    }
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn sqrt2() -> NumberField {
        NumberField::from_i64s(&[-2, 0, 1]).unwrap()
    }

    fn gaussian() -> NumberField {
        NumberField::from_i64s(&[1, 0, 1]).unwrap()
    }

    #[test]
    fn make_field_examples() {
        let k = sqrt2();
        assert_eq!(k.structure_constant(1, 1, 0), &big(2));
        assert_eq!(k.structure_constant(1, 1, 1), &big(0));
        assert_eq!(NumberField::from_i64s(&[-1, 0, 1]), Err(RingError::NotIrreducible));
        assert!(NumberField::from_i64s(&[-1, -1, 0, 1]).is_ok());
        assert_eq!(NumberField::from_i64s(&[-1, 0, 2]), Err(RingError::NotMonic));
        let forced = NumberField::new(&[big(-1), big(0), big(1)], true).unwrap();
        assert_eq!(forced.certificate_prime(), None);
    }

    #[test]
    fn structure_constant_invariants() {
        for k in [sqrt2(), gaussian(), NumberField::from_i64s(&[-1, -1, 0, 1]).unwrap()] {
            let d = k.degree();
            for j in 0..d {
                for l in 0..d {
                    for m in 0..d {
                        assert_eq!(k.structure_constant(j, l, m), k.structure_constant(l, j, m));
                        let delta = if l == m { big(1) } else { big(0) };
                        assert_eq!(k.structure_constant(0, l, m), &delta);
                    }
                    for i in 0..d {
                        let bi = k.basis(i);
                        let bj = k.basis(j);
                        let bl = k.basis(l);
                        let left = k.mul(&k.mul(&bi, &bj).unwrap(), &bl).unwrap();
                        let right = k.mul(&bi, &k.mul(&bj, &bl).unwrap()).unwrap();
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn mul_examples() {
        let k = sqrt2();
        let a = k.element_i64(&[1, 1]).unwrap();
        assert_eq!(k.mul(&a, &a).unwrap(), k.element_i64(&[3, 2]).unwrap());
        assert_eq!(k.mul(&a, &k.one()).unwrap(), a);
        let g = gaussian();
        let x = g.element_i64(&[2, 3]).unwrap();
        let y = g.element_i64(&[2, -3]).unwrap();
        assert_eq!(g.mul(&x, &y).unwrap(), g.element_i64(&[13, 0]).unwrap());
        assert_eq!(k.mul(&a, &x), Err(RingError::FieldMismatch));
    }

    #[test]
    fn mult_matrix_examples() {
        let k = sqrt2();
        let theta = k.basis(1);
        let m = k.mult_matrix(&theta).unwrap();
        assert_eq!(m.0, Matrix::from_rows(vec![vec![rat(0, 1), rat(2, 1)], vec![rat(1, 1), rat(0, 1)]]));
        assert_eq!(k.mult_matrix(&k.one()).unwrap().0, Matrix::identity(2));
        let m = k.mult_matrix(&k.element_i64(&[1, 1]).unwrap()).unwrap();
        assert_eq!(m.0, Matrix::from_rows(vec![vec![rat(1, 1), rat(2, 1)], vec![rat(1, 1), rat(1, 1)]]));
    }

    #[test]
    fn min_poly_examples() {
        let k = sqrt2();
        assert_eq!(k.min_poly_of(&k.basis(1)).unwrap(), Poly::from_i64s(&[-2, 0, 1]));
        assert_eq!(k.min_poly_of(&k.one()).unwrap(), Poly::from_i64s(&[-1, 1]));
        assert_eq!(
            k.min_poly_of(&k.element_i64(&[1, 1]).unwrap()).unwrap(),
            Poly::from_i64s(&[-1, -2, 1])
        );
    }

    #[test]
    fn conjugate_negation_examples() {
        let k = sqrt2();
        assert!(k.conjugates_negate(&k.basis(1)).unwrap());
        let g = gaussian();
        assert!(g.conjugates_negate(&g.basis(1)).unwrap());
        assert!(!k.conjugates_negate(&k.element_i64(&[1, 1]).unwrap()).unwrap());
        assert_eq!(k.conjugates_negate(&k.zero()), Err(RingError::ZeroInput));
    }

    #[test]
    fn inverse_and_norm() {
        let g = gaussian();
        let a = g.element_i64(&[1, 1]).unwrap();
        assert_eq!(g.norm(&a).unwrap(), rat(2, 1));
        let inv = g.inverse(&a).unwrap();
        assert_eq!(g.mul(&a, &inv).unwrap(), g.one());
        assert_eq!(g.inverse(&g.zero()), Err(RingError::ZeroInput));
    }

    #[test]
    fn spec_text_round_trip() {
        let k = NumberField::from_i64s(&[-1, -1, 0, 1]).unwrap();
        assert_eq!(NumberField::from_spec(&k.to_spec()).unwrap(), k);
    }
}
