//! Popular sets `{n : value(n) > max(δ^{k+1} - ε, 0)}` and their gap
//! statistics. A zero value is never popular.

use std::cmp::Ordering;

use serde::Serialize;

use crate::circle::CircleCoord;
use crate::scalar::rat_to_f64;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KhintchineReport {
    pub threshold: String,
    pub threshold_f64: f64,
    pub scanned: u64,
    pub popular: Vec<i64>,
    pub popular_count: u64,
    /// Largest distance between consecutive popular `n`, with `start - 1`
    /// and `end + 1` as sentinels.
    pub max_gap: u64,
    pub density: f64,
    /// `(window length, max gap)` for the quarter, half and full window.
    pub gap_ladder: Vec<(u64, u64)>,
    /// The max gap did not change across the two doublings.
    pub stable_at_scale: bool,
}

/// Largest gap of the sorted `popular` inside `[start, end]`.
pub fn max_gap(popular: &[i64], start: i64, end: i64) -> u64 {
    let mut prev = start - 1;
    let mut best = 0;
    for &n in popular.iter().filter(|&&n| n >= start && n <= end) {
        best = best.max((n - prev) as u64);
        prev = n;
    }
    best.max((end + 1 - prev) as u64)
}

/// `values[i]` belongs to `n = start + i`.
pub fn khintchine_report<C: CircleCoord>(
    values: &[C],
    start: i64,
    delta: &Rational,
    k: u32,
    epsilon: &Rational,
) -> KhintchineReport {
    let threshold = num_traits::pow(delta.clone(), k as usize + 1) - epsilon.clone();
    let t = C::from_rational(&threshold);
    let popular: Vec<i64> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.cmp_coord(&t) == Ordering::Greater && v.cmp_coord(&C::zero()) == Ordering::Greater)
        .map(|(i, _)| start + i as i64)
        .collect();
    let len = values.len() as i64;
    let end = start + len - 1;
    let gap_ladder: Vec<(u64, u64)> = [4, 2, 1]
        .iter()
        .map(|&div| {
            let w = (len / div).max(1);
            (w as u64, max_gap(&popular, start, start + w - 1))
        })
        .collect();
    let stable = gap_ladder.windows(2).all(|p| p[0].1 == p[1].1);
    KhintchineReport {
        threshold: threshold.to_string(),
        threshold_f64: rat_to_f64(&threshold),
        scanned: len as u64,
        popular_count: popular.len() as u64,
        max_gap: max_gap(&popular, start, end),
        density: if len > 0 { popular.len() as f64 / len as f64 } else { 0.0 },
        popular,
        gap_ladder,
        stable_at_scale: stable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    #[test]
    fn gaps_with_sentinels() {
        assert_eq!(max_gap(&[], 1, 10), 11);
        assert_eq!(max_gap(&[1, 2, 3], 1, 3), 1);
        assert_eq!(max_gap(&[3, 9], 1, 10), 6);
        assert_eq!(max_gap(&[5], 1, 10), 6);
    }

    #[test]
    fn large_epsilon_makes_everything_popular() {
        let vals = vec![rat(1, 10), rat(0, 1), rat(1, 3)];
        let rep = khintchine_report(&vals, 1, &rat(1, 2), 2, &rat(1, 8));
        // threshold 0: strictly positive values only
        assert_eq!(rep.popular, vec![1, 3]);
        let rep = khintchine_report(&vals, 1, &rat(1, 2), 2, &rat(1, 2));
        assert_eq!(rep.popular, vec![1, 3]);
        let rep = khintchine_report(&[rat(1, 10), rat(1, 100)], 1, &rat(1, 2), 2, &rat(1, 2));
        assert_eq!(rep.popular, vec![1, 2]);
        let zeros = vec![rat(0, 1); 4];
        assert!(khintchine_report(&zeros, 1, &rat(1, 2), 2, &rat(1, 8)).popular.is_empty());
    }

    #[test]
    fn empty_set_has_density_zero() {
        let zeros = vec![rat(0, 1); 5];
        let rep = khintchine_report(&zeros, 1, &rat(1, 2), 2, &rat(1, 100));
        assert_eq!(rep.popular_count, 0);
        assert_eq!(rep.density, 0.0);
        assert_eq!(rep.max_gap, 6);
    }

    proptest! {
        #[test]
        fn threshold_is_strict(vals in proptest::collection::vec(0i64..20, 1..60), eps in 0i64..10) {
            let vals: Vec<Rational> = vals.iter().map(|&v| rat(v, 20)).collect();
            let rep = khintchine_report(&vals, 0, &rat(1, 2), 2, &rat(eps, 100));
            let t = rat(1, 8) - rat(eps, 100);
            for &n in &rep.popular {
                prop_assert!(vals[n as usize] > t);
            }
            prop_assert_eq!(rep.popular_count as usize, vals.iter().filter(|v| **v > t).count());
        }
    }
}
