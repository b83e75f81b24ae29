use proptest::prelude::*;

use okdyn::intpoly::{certify_family, PolyOverK};
use okdyn::NumberField;

fn has_common_root(polys: &[Vec<i64>], m: i64) -> bool {
    (0..m).any(|x| {
        polys
            .iter()
            .all(|p| p.iter().rev().fold(0i64, |acc, &c| (acc * x + c).rem_euclid(m)) == 0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdicts_agree_with_brute_force(polys in prop::collection::vec(prop::collection::vec(-6i64..=6, 1..4), 1..3)) {
        let q = NumberField::from_i64s(&[0, 1]).unwrap();
        let family: Vec<PolyOverK> = polys.iter().map(|p| PolyOverK::from_i64s(&q, p).unwrap()).collect();
        let moduli: Vec<i64> = (1..=20).collect();
        let ms: Vec<_> = moduli.iter().map(|&m| q.integer_i64(&[m]).unwrap()).collect();
        let cert = certify_family(&family, &ms, &q).unwrap();
        let mut all = true;
        for (v, &m) in cert.verdicts.iter().zip(&moduli) {
            let root = has_common_root(&polys, m);
            prop_assert_eq!(v.witness.is_some(), root, "modulus {}", m);
            all &= root;
        }
        prop_assert_eq!(cert.certified_up_to_bound(), all);
    }
}
