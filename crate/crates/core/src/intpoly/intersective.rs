//! Joint intersectivity modulo principal subgroups `rO_K` and the shift
//! `(ξ, D)` with `p_i(ξ + D O_K) ⊆ rO_K`.

use num_integer::Integer as _;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{is_ok_valued, IntPolyError, PolyOverK};
use crate::ring::{AlgebraicInteger, NumberField, PrincipalSubgroup};
use crate::{Integer, Rational};

const SHIFT_SAMPLES: usize = 100;
const SHIFT_SEED: u64 = 0x0c0f_fee5;

fn family_denominator(family: &[PolyOverK]) -> Integer {
    family.iter().fold(Integer::one(), |acc, p| acc.lcm(&p.denominator()))
}

fn all_in(
    family: &[PolyOverK],
    field: &NumberField,
    sub: &PrincipalSubgroup,
    xi: &AlgebraicInteger,
) -> Result<Option<usize>, IntPolyError> {
    for (i, p) in family.iter().enumerate() {
        let v = p.eval(field, xi.as_number())?;
        if !sub.contains_coords(v.coords()) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// First `ξ` (in canonical residue order) with every `p_i(ξ) ∈ rO_K`, or
/// `None`, which certifies the family is not jointly intersective mod `r`.
pub fn joint_intersectivity_search(
    family: &[PolyOverK],
    r: &AlgebraicInteger,
    field: &NumberField,
) -> Result<Option<AlgebraicInteger>, IntPolyError> {
    if r.is_zero() {
        return Err(IntPolyError::ZeroModulus);
    }
    for (i, p) in family.iter().enumerate() {
        if !is_ok_valued(p, field)? {
            return Err(IntPolyError::NotOkValued(i));
        }
    }
    let sub = field.subgroup(r)?;
    let delta = Rational::from_integer(family_denominator(family));
    let wide = field.to_integer(&field.scale(r.as_number(), &delta))?;
    for xi in field.residues(&wide)? {
        if all_in(family, field, &sub, &xi)?.is_none() {
            return Ok(Some(xi));
        }
    }
    Ok(None)
}

/// `(ξ, D)` with `p_i(ξ + D n) ∈ rO_K` for all `n ∈ O_K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectiveShift {
    pub xi: AlgebraicInteger,
    pub d: AlgebraicInteger,
}

impl IntersectiveShift {
    /// Checks the shift on `samples` seeded pseudorandom `n` with coordinates
    /// in `[-1000, 1000]`; returns the first failing `n`.
    pub fn verify(
        &self,
        family: &[PolyOverK],
        r: &AlgebraicInteger,
        field: &NumberField,
        samples: usize,
        seed: u64,
    ) -> Result<Option<AlgebraicInteger>, IntPolyError> {
        let sub = field.subgroup(r)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let coords: Vec<i64> = (0..field.degree()).map(|_| rng.gen_range(-1000..=1000)).collect();
            let n = field.integer_i64(&coords)?;
            let dn = field.mul(self.d.as_number(), n.as_number())?;
            let point = field.to_integer(&field.add(self.xi.as_number(), &dn)?)?;
            if all_in(family, field, &sub, &point)?.is_some() {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }
}

pub fn intersective_shift(
    family: &[PolyOverK],
    r: &AlgebraicInteger,
    xi: &AlgebraicInteger,
    field: &NumberField,
) -> Result<IntersectiveShift, IntPolyError> {
    if r.is_zero() {
        return Err(IntPolyError::ZeroModulus);
    }
    let sub = field.subgroup(r)?;
    if let Some(index) = all_in(family, field, &sub, xi)? {
        return Err(IntPolyError::PreconditionFailed { index });
    }
    let d = if sub.is_trivial() {
        field.to_integer(&field.one())?
    } else {
        let delta = Rational::from_integer(family_denominator(family));
        field.to_integer(&field.scale(r.as_number(), &delta))?
    };
    let shift = IntersectiveShift { xi: xi.clone(), d };
    if let Some(n) = shift.verify(family, r, field, SHIFT_SAMPLES, SHIFT_SEED)? {
        return Err(IntPolyError::ShiftVerificationFailed(n.as_number().to_string()));
    }
    Ok(shift)
}

/// Moduli tried by default: rational primes up to 30, plus `1 + b_1` and
/// `b_1` when the field is not Q.
pub fn default_moduli(field: &NumberField) -> Vec<AlgebraicInteger> {
    let d = field.degree();
    let mut out: Vec<AlgebraicInteger> = [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        .iter()
        .map(|&p| field.to_integer(&field.from_rational(Rational::from_integer(p.into()))).unwrap())
        .collect();
    if d >= 2 {
        let b1 = field.basis(1);
        out.push(field.to_integer(&field.add_unchecked(&field.one(), &b1)).unwrap());
        out.push(field.to_integer(&b1).unwrap());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusVerdict {
    pub modulus: AlgebraicInteger,
    pub witness: Option<AlgebraicInteger>,
}

/// Per-modulus outcome of a certification sweep. Passing every modulus is
/// reported as certified up to the tested set, never as intersective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectivityCertificate {
    pub verdicts: Vec<ModulusVerdict>,
}

impl IntersectivityCertificate {
    pub fn certified_up_to_bound(&self) -> bool {
        self.verdicts.iter().all(|v| v.witness.is_some())
    }

    pub fn first_failure(&self) -> Option<&AlgebraicInteger> {
        self.verdicts.iter().find(|v| v.witness.is_none()).map(|v| &v.modulus)
    }

    pub fn summary(&self) -> String {
        match self.first_failure() {
            Some(m) => format!("not jointly intersective: no root modulo {}", m.as_number()),
            None => format!("certified up to bound ({} moduli)", self.verdicts.len()),
        }
    }
}

pub fn certify_family(
    family: &[PolyOverK],
    moduli: &[AlgebraicInteger],
    field: &NumberField,
) -> Result<IntersectivityCertificate, IntPolyError> {
    let verdicts = moduli
        .iter()
        .map(|r| {
            Ok(ModulusVerdict {
                modulus: r.clone(),
                witness: joint_intersectivity_search(family, r, field)?,
            })
        })
        .collect::<Result<Vec<_>, IntPolyError>>()?;
    Ok(IntersectivityCertificate { verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn q() -> NumberField {
        NumberField::from_i64s(&[0, 1]).unwrap()
    }

    fn int(k: &NumberField, c: &[i64]) -> AlgebraicInteger {
        k.integer_i64(c).unwrap()
    }

    #[test]
    fn square_has_root_zero() {
        for k in [q(), NumberField::from_i64s(&[1, 0, 1]).unwrap()] {
            let p = PolyOverK::from_i64s(&k, &[0, 0, 1]).unwrap();
            let mut r = vec![0i64; k.degree()];
            r[0] = 6;
            let xi = joint_intersectivity_search(&[p], &int(&k, &r), &k).unwrap();
            assert!(xi.unwrap().is_zero());
        }
    }

    #[test]
    fn not_found_examples() {
        let k = q();
        let p = PolyOverK::from_i64s(&k, &[1, 0, 1]).unwrap();
        assert_eq!(joint_intersectivity_search(&[p], &int(&k, &[3]), &k).unwrap(), None);
        let a = PolyOverK::from_i64s(&k, &[0, 0, 1]).unwrap();
        let b = PolyOverK::from_i64s(&k, &[-1, 1]).unwrap();
        assert_eq!(joint_intersectivity_search(&[a, b], &int(&k, &[2]), &k).unwrap(), None);
    }

    #[test]
    fn errors() {
        let k = q();
        let p = PolyOverK::from_i64s(&k, &[0, 1]).unwrap();
        assert_eq!(
            joint_intersectivity_search(std::slice::from_ref(&p), &int(&k, &[0]), &k).unwrap_err(),
            IntPolyError::ZeroModulus
        );
        let half = PolyOverK::from_rationals(&k, &[rat(0, 1), rat(1, 2)]).unwrap();
        assert_eq!(
            joint_intersectivity_search(&[p.clone(), half], &int(&k, &[2]), &k).unwrap_err(),
            IntPolyError::NotOkValued(1)
        );
        assert_eq!(
            intersective_shift(&[p], &int(&k, &[2]), &int(&k, &[1]), &k).unwrap_err(),
            IntPolyError::PreconditionFailed { index: 0 }
        );
    }

    #[test]
    fn shift_examples() {
        let k = q();
        let sq = PolyOverK::from_i64s(&k, &[0, 0, 1]).unwrap();
        let s = intersective_shift(&[sq], &int(&k, &[4]), &int(&k, &[0]), &k).unwrap();
        assert_eq!(s.d, int(&k, &[4]));
        let tri = PolyOverK::from_rationals(&k, &[rat(0, 1), rat(1, 2), rat(1, 2)]).unwrap();
        let s = intersective_shift(std::slice::from_ref(&tri), &int(&k, &[2]), &int(&k, &[0]), &k).unwrap();
        assert_eq!(s.d, int(&k, &[4]));
        let s = intersective_shift(&[tri], &int(&k, &[1]), &int(&k, &[0]), &k).unwrap();
        assert_eq!(s.d, int(&k, &[1]));
    }

    #[test]
    fn shift_over_gaussian() {
        let k = NumberField::from_i64s(&[1, 0, 1]).unwrap();
        // p(x) = x^2 + x, r = 1 + i
        let p = PolyOverK::from_i64s(&k, &[0, 1, 1]).unwrap();
        let r = int(&k, &[1, 1]);
        let xi = joint_intersectivity_search(std::slice::from_ref(&p), &r, &k).unwrap().unwrap();
        let s = intersective_shift(std::slice::from_ref(&p), &r, &xi, &k).unwrap();
        assert_eq!(s.verify(&[p], &r, &k, 300, 9).unwrap(), None);
    }

    #[test]
    fn certificate_sweep() {
        let k = q();
        let sq = PolyOverK::from_i64s(&k, &[0, 0, 1]).unwrap();
        let cert = certify_family(&[sq], &default_moduli(&k), &k).unwrap();
        assert!(cert.certified_up_to_bound());
        assert!(cert.summary().starts_with("certified up to bound"));
        let p = PolyOverK::from_i64s(&k, &[1, 0, 1]).unwrap();
        let cert = certify_family(&[p], &default_moduli(&k), &k).unwrap();
        assert_eq!(cert.first_failure(), Some(&int(&k, &[3])));
    }
}
