use num_traits::Signed;
use proptest::prelude::*;

use okdyn::{NumberField, Rational};

fn fields() -> Vec<NumberField> {
    [&[1, 0, 1][..], &[-2, 0, 1], &[-1, -1, 0, 1], &[3, 1, 0, 0, 1]]
        .iter()
        .map(|p| NumberField::from_i64s(p).unwrap())
        .collect()
}

fn element(k: &NumberField, c: &[i64]) -> okdyn::AlgebraicNumber {
    k.element_i64(&c[..k.degree()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(which in 0usize..4, a in prop::collection::vec(-6i64..=6, 4), b in prop::collection::vec(-6i64..=6, 4), c in prop::collection::vec(-6i64..=6, 4)) {
        let k = &fields()[which];
        let (a, b, c) = (element(k, &a), element(k, &b), element(k, &c));
        let ab = k.mul(&a, &b).unwrap();
        prop_assert_eq!(&ab, &k.mul(&b, &a).unwrap());
        prop_assert_eq!(k.mul(&ab, &c).unwrap(), k.mul(&a, &k.mul(&b, &c).unwrap()).unwrap());
        let left = k.mul(&a, &k.add(&b, &c).unwrap()).unwrap();
        let right = k.add(&ab, &k.mul(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(k.norm(&ab).unwrap(), k.norm(&a).unwrap() * k.norm(&b).unwrap());
    }

    #[test]
    fn inverse_and_membership(which in 0usize..4, a in prop::collection::vec(-6i64..=6, 4), r in prop::collection::vec(-3i64..=3, 4), m in prop::collection::vec(-5i64..=5, 4)) {
        let k = &fields()[which];
        let a = element(k, &a);
        if !a.is_zero() {
            let inv = k.inverse(&a).unwrap();
            prop_assert_eq!(k.mul(&a, &inv).unwrap(), k.one());
        }
        let r = k.integer_i64(&r[..k.degree()]).unwrap();
        prop_assume!(!r.is_zero());
        let m = k.integer_i64(&m[..k.degree()]).unwrap();
        let rm = k.to_integer(&k.mul(r.as_number(), m.as_number()).unwrap()).unwrap();
        prop_assert!(k.subgroup_membership(&rm, &r).unwrap());
        let one = k.integer_i64(&{ let mut v = vec![0; k.degree()]; v[0] = 1; v }).unwrap();
        let unit = k.norm(r.as_number()).unwrap().abs() == Rational::from_integer(1.into());
        prop_assert_eq!(k.subgroup_membership(&one, &r).unwrap(), unit);
    }
}
