use proptest::prelude::*;

use okdyn::popdiff::{self, read_bits, read_rle, write_bits, write_rle, GridSet};

fn count_with_zero(set: &GridSet, shifts: &[Vec<i64>]) -> u64 {
    let mut all = vec![vec![0; set.dim()]];
    all.extend_from_slice(shifts);
    set.intersection_count(&all).unwrap()
}

#[test]
fn instances_round_trip_through_both_formats() {
    let sets = [
        popdiff::interval(2, 17, 3, 11).unwrap(),
        popdiff::residue_classes(1, 100, 7, &[0, 3]).unwrap(),
        popdiff::quadratic_residues(2, 13).unwrap(),
        popdiff::random(3, 9, 0.3, 11).unwrap(),
    ];
    for set in sets {
        let mut bits = Vec::new();
        write_bits(&set, &mut bits).unwrap();
        assert_eq!(read_bits(bits.as_slice()).unwrap(), set);
        let mut rle = Vec::new();
        write_rle(&set, &mut rle).unwrap();
        assert_eq!(read_rle(rle.as_slice()).unwrap(), set);
    }
}

#[test]
fn interval_counts_have_closed_form() {
    // |[0, L) ∩ ([0, L) - v)| = L - |v| cyclically when |v| <= N - L
    let (n, l) = (200usize, 60usize);
    let set = popdiff::interval(1, n, 0, l).unwrap();
    for v in -140i64..=140 {
        let expect = (l as i64 - v.abs()).max(0) as u64;
        assert_eq!(count_with_zero(&set, &[vec![v]]), expect, "v = {v}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counts_shrink_as_shifts_are_added(seed in 0u64..1000, v in prop::collection::vec(-40i64..40, 3)) {
        let set = popdiff::random(1, 37, 0.5, seed).unwrap();
        let one = count_with_zero(&set, &[vec![v[0]]]);
        let two = count_with_zero(&set, &[vec![v[0]], vec![v[1]]]);
        let three = count_with_zero(&set, &[vec![v[0]], vec![v[1]], vec![v[2]]]);
        prop_assert!(three <= two && two <= one && one <= set.popcount());
    }

    #[test]
    fn truncated_count_is_within_the_boundary_bound(seed in 0u64..1000, v in prop::collection::vec(-12i64..12, 4)) {
        let set = popdiff::random(2, 16, 0.6, seed).unwrap();
        let shifts = vec![vec![v[0], v[1]], vec![v[2], v[3]]];
        let cyc = set.intersection_count(&shifts).unwrap() as i64;
        let trunc = set.intersection_count_truncated(&shifts).unwrap() as i64;
        prop_assert!(trunc <= cyc);
        prop_assert!(cyc - trunc <= set.boundary_bound(&shifts) as i64);
    }
}
