//! Popular differences on cyclic grids `Z_N^d` (`d ≤ 3`): bitset
//! intersection counts, popular-shift extraction and gap statistics.

mod instances;
mod io;
mod report;

use num_integer::Integer as _;
use thiserror::Error;

use crate::bits::BitVec;
use crate::intpoly::IntPolyError;
use crate::Rational;

pub use instances::{bohr, interval, quadratic_residues, random, residue_classes};
pub use io::{read_bits, read_rle, write_bits, write_rle, HEADER_LEN, MAGIC};
pub use report::{popular_differences, popular_differences_at, ConfigurationCountReport, CountRow};

/// Grids larger than this are refused.
pub const MAX_CELLS: usize = 1 << 31;

#[derive(Debug, Error)]
pub enum PopDiffError {
    #[error("empty range")]
    EmptyRange,
    #[error("grid dimension must be 1, 2 or 3 (got {0})")]
    Dimension(usize),
    #[error("grid side {side} in dimension {d} is empty or too large")]
    Side { d: usize, side: usize },
    #[error("shift has {got} coordinates, grid has {expected}")]
    ShiftArity { expected: usize, got: usize },
    #[error("epsilon must be positive")]
    Epsilon,
    #[error("random set popcount {got} is more than 4 sigma from {expected}")]
    Concentration { got: u64, expected: f64 },
    #[error("polynomial value {0} is not an algebraic integer")]
    NonIntegral(String),
    #[error("malformed grid file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    IntPoly(#[from] IntPolyError),
}

/// A subset of `Z_N^d`, stored as `N^{d-1}` rows of `N` bits. Cell
/// `(x_0, …, x_{d-1})` has flat index `x_0 + N x_1 + N^2 x_2` and lives in
/// row `x_1 + N x_2`, bit `x_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSet {
    d: usize,
    side: usize,
    rows: Vec<BitVec>,
    popcount: u64,
}

fn check_shape(d: usize, side: usize) -> Result<usize, PopDiffError> {
    if !(1..=3).contains(&d) {
        return Err(PopDiffError::Dimension(d));
    }
    let cells = (0..d).try_fold(1usize, |acc, _| acc.checked_mul(side));
    match cells {
        Some(c) if side > 0 && c <= MAX_CELLS => Ok(c),
        _ => Err(PopDiffError::Side { d, side }),
    }
}

impl GridSet {
    pub fn empty(d: usize, side: usize) -> Result<Self, PopDiffError> {
        let cells = check_shape(d, side)?;
        Ok(GridSet {
            d,
            side,
            rows: vec![BitVec::zeros(side); cells / side],
            popcount: 0,
        })
    }

    pub fn full(d: usize, side: usize) -> Result<Self, PopDiffError> {
        let cells = check_shape(d, side)?;
        Ok(GridSet {
            d,
            side,
            rows: vec![BitVec::ones(side); cells / side],
            popcount: cells as u64,
        })
    }

    /// Cells listed by flat index.
    pub fn from_flat(d: usize, side: usize, cells: impl IntoIterator<Item = usize>) -> Result<Self, PopDiffError> {
        let mut g = Self::empty(d, side)?;
        let total = g.cells();
        for c in cells {
            if c >= total {
                return Err(PopDiffError::Format(format!("cell {c} outside grid of {total}")));
            }
            g.rows[c / side].set(c % side, true);
        }
        g.recount();
        Ok(g)
    }

    pub fn from_predicate(d: usize, side: usize, f: impl Fn(&[usize]) -> bool) -> Result<Self, PopDiffError> {
        let mut g = Self::empty(d, side)?;
        let mut x = vec![0usize; d];
        for flat in 0..g.cells() {
            g.unflatten(flat, &mut x);
            if f(&x) {
                g.rows[flat / side].set(flat % side, true);
            }
        }
        g.recount();
        Ok(g)
    }

    fn recount(&mut self) {
        self.popcount = self.rows.iter().map(BitVec::count_ones).sum();
    }

    fn unflatten(&self, mut flat: usize, x: &mut [usize]) {
        for xi in x.iter_mut() {
            *xi = flat % self.side;
            flat /= self.side;
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn cells(&self) -> usize {
        self.rows.len() * self.side
    }

    pub fn popcount(&self) -> u64 {
        self.popcount
    }

    pub fn density(&self) -> Rational {
        Rational::new(self.popcount.into(), (self.cells() as u64).into())
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn contains_flat(&self, flat: usize) -> bool {
        self.rows[flat / self.side].get(flat % self.side)
    }

    pub fn contains(&self, x: &[usize]) -> bool {
        let flat = x.iter().rev().fold(0, |acc, &xi| acc * self.side + xi % self.side);
        self.contains_flat(flat)
    }

    pub fn iter_flat(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(move |(r, row)| row.iter_ones().map(move |i| r * self.side + i))
    }

    fn reduce(&self, v: &[i64]) -> Result<Vec<usize>, PopDiffError> {
        if v.len() != self.d {
            return Err(PopDiffError::ShiftArity {
                expected: self.d,
                got: v.len(),
            });
        }
        Ok(v.iter().map(|&t| t.mod_floor(&(self.side as i64)) as usize).collect())
    }

    /// Row index reached from `row` by adding `(v_1, …, v_{d-1})`.
    fn shifted_row(&self, row: usize, v: &[usize]) -> usize {
        let n = self.side;
        match self.d {
            1 => 0,
            2 => (row + v[1]) % n,
            _ => {
                let (x1, x2) = (row % n, row / n);
                (x1 + v[1]) % n + n * ((x2 + v[2]) % n)
            }
        }
    }

    /// `{x : x + v ∈ E}`, i.e. `E - v`.
    pub fn translate(&self, v: &[i64]) -> Result<Self, PopDiffError> {
        let v = self.reduce(v)?;
        let rows = (0..self.rows.len())
            .map(|r| self.rows[self.shifted_row(r, &v)].rotated(v[0]))
            .collect();
        Ok(GridSet {
            d: self.d,
            side: self.side,
            rows,
            popcount: self.popcount,
        })
    }

    /// `|{x : x + v ∈ E for every v in shifts}|`, cyclically, by
    /// word-level row rotation.
    pub fn intersection_count(&self, shifts: &[Vec<i64>]) -> Result<u64, PopDiffError> {
        if shifts.is_empty() {
            return Ok(self.cells() as u64);
        }
        let reduced: Vec<Vec<usize>> = shifts.iter().map(|v| self.reduce(v)).collect::<Result<_, _>>()?;
        let mut total = 0;
        for r in 0..self.rows.len() {
            let mut acc = self.rows[self.shifted_row(r, &reduced[0])].rotated(reduced[0][0]);
            for v in &reduced[1..] {
                let src = &self.rows[self.shifted_row(r, v)];
                if v[0] == 0 {
                    acc.and_assign(src);
                } else {
                    acc.and_assign(&src.rotated(v[0]));
                }
            }
            total += acc.count_ones();
        }
        Ok(total)
    }

    /// Same count by a direct loop over cells.
    pub fn intersection_count_naive(&self, shifts: &[Vec<i64>]) -> Result<u64, PopDiffError> {
        let reduced: Vec<Vec<usize>> = shifts.iter().map(|v| self.reduce(v)).collect::<Result<_, _>>()?;
        let mut x = vec![0usize; self.d];
        let mut y = vec![0usize; self.d];
        let mut total = 0;
        for flat in 0..self.cells() {
            self.unflatten(flat, &mut x);
            let all = reduced.iter().all(|v| {
                for i in 0..self.d {
                    y[i] = (x[i] + v[i]) % self.side;
                }
                self.contains(&y)
            });
            total += all as u64;
        }
        Ok(total)
    }

    /// Count inside the box `{0..N-1}^d` without wraparound: `x` and every
    /// `x + v` must stay in the box.
    pub fn intersection_count_truncated(&self, shifts: &[Vec<i64>]) -> Result<u64, PopDiffError> {
        for v in shifts {
            self.reduce(v)?;
        }
        let n = self.side as i64;
        let mut x = vec![0usize; self.d];
        let mut total = 0;
        for flat in 0..self.cells() {
            self.unflatten(flat, &mut x);
            let all = shifts.iter().all(|v| {
                let y: Vec<i64> = x.iter().zip(v).map(|(&a, &b)| a as i64 + b).collect();
                y.iter().all(|&c| (0..n).contains(&c))
                    && self.contains(&y.iter().map(|&c| c as usize).collect::<Vec<_>>())
            });
            total += all as u64;
        }
        Ok(total)
    }

    /// Upper bound on `|cyclic count - truncated count|`: the cells whose
    /// translate by some `v` wraps in some coordinate.
    pub fn boundary_bound(&self, shifts: &[Vec<i64>]) -> u64 {
        let n = self.side as u64;
        let layer = (self.cells() / self.side) as u64;
        let wraps: u64 = shifts
            .iter()
            .flat_map(|v| v.iter().map(|t| t.unsigned_abs().min(n)))
            .sum();
        (wraps * layer).min(self.cells() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_grid(d: usize, side: usize, seed: u64) -> GridSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cells = side.pow(d as u32);
        GridSet::from_flat(d, side, (0..cells).filter(|_| rng.gen_bool(0.5))).unwrap()
    }

    #[test]
    fn trivial_counts() {
        let full = GridSet::full(2, 10).unwrap();
        assert_eq!(full.intersection_count(&[vec![3, -4], vec![7, 7]]).unwrap(), 100);
        let e = random_grid(2, 13, 1);
        assert_eq!(e.intersection_count(&[vec![0, 0]]).unwrap(), e.popcount());
        assert_eq!(e.intersection_count(&[]).unwrap(), 169);
    }

    #[test]
    fn shape_checks() {
        assert!(matches!(GridSet::empty(4, 3), Err(PopDiffError::Dimension(4))));
        assert!(matches!(GridSet::empty(2, 0), Err(PopDiffError::Side { .. })));
        assert!(matches!(GridSet::empty(3, 1 << 12), Err(PopDiffError::Side { .. })));
        let e = GridSet::full(2, 4).unwrap();
        assert!(matches!(e.intersection_count(&[vec![1]]), Err(PopDiffError::ShiftArity { .. })));
    }

    #[test]
    fn three_dimensional_fast_matches_naive() {
        let e = random_grid(3, 9, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let shifts: Vec<Vec<i64>> = (0..3)
                .map(|_| (0..3).map(|_| rng.gen_range(-20..20)).collect())
                .collect();
            assert_eq!(e.intersection_count(&shifts).unwrap(), e.intersection_count_naive(&shifts).unwrap());
        }
    }

    #[test]
    fn truncated_count_within_boundary_bound() {
        let e = random_grid(2, 24, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..40 {
            let shifts: Vec<Vec<i64>> = vec![vec![0, 0]]
                .into_iter()
                .chain((0..2).map(|_| (0..2).map(|_| rng.gen_range(-6..6)).collect()))
                .collect();
            let c = e.intersection_count(&shifts).unwrap();
            let t = e.intersection_count_truncated(&shifts).unwrap();
            assert!(t <= c);
            assert!(c - t <= e.boundary_bound(&shifts));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn counts_invariant_under_translation_and_permutation(
            seed in 0u64..1000,
            side in 2usize..20,
            a in proptest::collection::vec(-40i64..40, 2),
            b in proptest::collection::vec(-40i64..40, 2),
            t in proptest::collection::vec(-40i64..40, 2),
        ) {
            let e = random_grid(2, side, seed);
            let shifts = vec![vec![0, 0], a.clone(), b.clone()];
            let c = e.intersection_count(&shifts).unwrap();
            prop_assert_eq!(c, e.intersection_count_naive(&shifts).unwrap());
            prop_assert_eq!(c, e.intersection_count(&[b.clone(), vec![0, 0], a.clone()]).unwrap());
            let moved = e.translate(&t).unwrap();
            prop_assert_eq!(moved.popcount(), e.popcount());
            prop_assert_eq!(c, moved.intersection_count(&shifts).unwrap());
            // one nonzero layer never exceeds |E|
            prop_assert!(e.intersection_count(&[vec![0, 0], a]).unwrap() <= e.popcount());
        }

        #[test]
        fn translate_moves_membership(seed in 0u64..1000, side in 1usize..30, t in -100i64..100, x in 0usize..30) {
            let e = random_grid(1, side, seed);
            let m = e.translate(&[t]).unwrap();
            let x = x % side;
            let y = (x as i64 + t).rem_euclid(side as i64) as usize;
            prop_assert_eq!(m.contains(&[x]), e.contains(&[y]));
        }
    }
}
