//! Per-shift configuration counts and the popular set they define.

use num_bigint::BigInt;
use num_integer::{Integer as _, Roots};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{GridSet, PopDiffError};
use crate::dynsim::max_gap;
use crate::intpoly::{coordinate_family, PolyOverK};
use crate::scalar::rat_to_f64;
use crate::{NumberField, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub n: Vec<i64>,
    pub count: u64,
    pub popular: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigurationCountReport {
    pub dim: usize,
    pub side: usize,
    pub k: usize,
    pub radius: i64,
    pub density: String,
    pub epsilon: String,
    /// `(δ^{k+1} - ε) N^d`; popular counts are positive and strictly exceed it.
    pub threshold: String,
    pub threshold_f64: f64,
    pub scanned: u64,
    pub popular_count: u64,
    pub popular_fraction: f64,
    /// Largest gap of the popular set along lines in each coordinate
    /// direction of the box `[-radius, radius]^d`.
    pub max_gap: Vec<u64>,
    /// Largest difference between the cyclic count and the count in the
    /// untruncated box `{0..N-1}^d`, over the scanned `n`.
    pub boundary_bound: u64,
    #[serde(skip)]
    pub rows: Vec<CountRow>,
}

impl ConfigurationCountReport {
    pub fn popular(&self) -> impl Iterator<Item = &[i64]> {
        self.rows.iter().filter(|r| r.popular).map(|r| r.n.as_slice())
    }

    pub fn to_csv(&self) -> String {
        let mut out: Vec<String> = (1..=self.dim).map(|i| format!("n{i}")).collect();
        out.push("count".into());
        out.push("popular".into());
        let mut s = out.join(",");
        s.push('\n');
        for r in &self.rows {
            for v in &r.n {
                s.push_str(&format!("{v},"));
            }
            s.push_str(&format!("{},{}\n", r.count, r.popular));
        }
        s
    }
}

/// Grid vector for a shift: coordinates with `|v| ≥ N` keep their residue
/// and get magnitude at least `N`, which is all the boundary bound needs.
fn grid_shift(v: &BigInt, side: usize) -> i64 {
    let n = BigInt::from(side);
    if v.abs() < n {
        return v.to_i64().expect("bounded by grid side");
    }
    let r = v.mod_floor(&n);
    (r + n).to_i64().expect("bounded by twice the grid side")
}

fn box_points(d: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-radius..=radius).map(move |t| {
                    let mut q = p.clone();
                    q.push(t);
                    q
                })
            })
            .collect();
    }
    out
}

/// Counts `|E ∩ (E - v_1(n)) ∩ … ∩ (E - v_k(n))|` for `n ∈ [-R, R]^d`,
/// where `v_i(n)` are the coordinates of `p_i(n)` and `R` defaults to `⌊√N⌋`.
pub fn popular_differences(
    set: &GridSet,
    family: &[PolyOverK],
    field: &NumberField,
    radius: Option<i64>,
    epsilon: &Rational,
) -> Result<ConfigurationCountReport, PopDiffError> {
    let d = field.degree();
    if d != set.dim() {
        return Err(PopDiffError::ShiftArity {
            expected: set.dim(),
            got: d,
        });
    }
    let radius = radius.unwrap_or_else(|| (set.side() as i64).sqrt());
    if radius < 1 {
        return Err(PopDiffError::EmptyRange);
    }
    let coords = coordinate_family(family, field)?;
    let points = box_points(d, radius);
    let shifts: Vec<Vec<Vec<i64>>> = points
        .iter()
        .map(|n| {
            let x: Vec<Rational> = n.iter().map(|&t| Rational::from_integer(t.into())).collect();
            coords
                .chunks(d)
                .map(|p| {
                    p.iter()
                        .map(|c| {
                            let v = c.eval(&x);
                            if !v.is_integer() {
                                return Err(PopDiffError::NonIntegral(v.to_string()));
                            }
                            Ok(grid_shift(&v.to_integer(), set.side()))
                        })
                        .collect()
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    popular_differences_at(set, family.len(), radius, &points, &shifts, epsilon)
}

/// Same report for explicit shift vectors: `shifts[j]` holds the `k`
/// grid vectors for `points[j]`, a box `[-radius, radius]^d` in any order.
pub fn popular_differences_at(
    set: &GridSet,
    k: usize,
    radius: i64,
    points: &[Vec<i64>],
    shifts: &[Vec<Vec<i64>>],
    epsilon: &Rational,
) -> Result<ConfigurationCountReport, PopDiffError> {
    if *epsilon <= Rational::zero() {
        return Err(PopDiffError::Epsilon);
    }
    if points.iter().all(|p| p.iter().all(|&t| t == 0)) {
        return Err(PopDiffError::EmptyRange);
    }
    let d = set.dim();
    let cells = Rational::from_integer((set.cells() as u64).into());
    let threshold = (num_traits::pow(set.density(), k + 1) - epsilon) * &cells;
    let zero = vec![0i64; d];
    let rows: Vec<CountRow> = points
        .par_iter()
        .zip(shifts.par_iter())
        .map(|(n, vs)| {
            let mut all = Vec::with_capacity(vs.len() + 1);
            all.push(zero.clone());
            all.extend(vs.iter().cloned());
            let count = set.intersection_count(&all)?;
            let is_zero = n.iter().all(|&t| t == 0);
            let popular = !is_zero && count > 0 && Rational::from_integer(count.into()) > threshold;
            Ok(CountRow {
                n: n.clone(),
                count,
                popular,
            })
        })
        .collect::<Result<_, PopDiffError>>()?;
    let boundary_bound = shifts.iter().map(|vs| set.boundary_bound(vs)).max().unwrap_or(0);
    let scanned = rows.iter().filter(|r| r.n.iter().any(|&t| t != 0)).count() as u64;
    let popular_count = rows.iter().filter(|r| r.popular).count() as u64;

    let max_gap = (0..d)
        .map(|j| {
            let mut lines: std::collections::BTreeMap<Vec<i64>, Vec<i64>> = Default::default();
            for r in &rows {
                let mut key = r.n.clone();
                key.remove(j);
                let entry = lines.entry(key).or_default();
                if r.popular {
                    entry.push(r.n[j]);
                }
            }
            lines
                .into_values()
                .map(|mut p| {
                    p.sort_unstable();
                    max_gap(&p, -radius, radius)
                })
                .max()
                .unwrap_or(0)
        })
        .collect();

    Ok(ConfigurationCountReport {
        dim: d,
        side: set.side(),
        k,
        radius,
        density: set.density().to_string(),
        epsilon: epsilon.to_string(),
        threshold_f64: rat_to_f64(&threshold),
        threshold: threshold.to_string(),
        scanned,
        popular_count,
        popular_fraction: if scanned > 0 {
            popular_count as f64 / scanned as f64
        } else {
            0.0
        },
        max_gap,
        boundary_bound,
        rows,
    })
}
