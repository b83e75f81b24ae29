//! Linear independence modulo constants and the Jacobian criterion for
//! algebraic independence.

use std::collections::BTreeSet;

use super::IntPolyError;
use crate::linalg::Matrix;
use crate::multipoly::Monomial;
use crate::{MultiPolyQ, Rational};

/// Rank over Q of the span of `family`.
pub fn linear_rank(family: &[MultiPolyQ]) -> usize {
    if family.is_empty() {
        return 0;
    }
    let monomials: BTreeSet<&Monomial> = family.iter().flat_map(|p| p.support()).collect();
    let monomials: Vec<&Monomial> = monomials.into_iter().collect();
    let m = Matrix::from_fn(family.len(), monomials.len(), |i, j| family[i].coeff(monomials[j]));
    m.rank()
}

/// `{1} ∪ family` is linearly independent over Q.
pub fn independence_with_constants(family: &[MultiPolyQ]) -> bool {
    let Some(first) = family.first() else {
        return true;
    };
    let mut with_one = family.to_vec();
    with_one.push(MultiPolyQ::one(first.nvars()));
    linear_rank(&with_one) == with_one.len()
}

/// Deterministic evaluation points: `(1, 0, ..., 0)` followed by
/// `(1, b, b², ...)` for `b = 2, 3, 4, ...`.
pub fn jacobian_points(nvars: usize, count: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push((0..nvars).map(|i| Rational::from_integer((i == 0).into())).collect());
    let mut b = 2i64;
    while out.len() < count {
        let mut p = Vec::with_capacity(nvars);
        let mut v = Rational::from_integer(1.into());
        for _ in 0..nvars {
            p.push(v.clone());
            v *= Rational::from_integer(b.into());
        }
        out.push(p);
        b += 1;
    }
    out
}

const NUMERIC_POINTS: usize = 16;
const SYMBOLIC_LIMIT: usize = 4;
const GRID_LIMIT: u64 = 200_000;

/// Whether the Jacobian of `family` (in `nvars` variables) has full row
/// rank as a matrix of polynomials.
pub fn jacobian_alg_independence(family: &[MultiPolyQ], nvars: usize) -> Result<bool, IntPolyError> {
    let k = family.len();
    if k > nvars {
        return Err(IntPolyError::TooManyPolynomials { got: k, vars: nvars });
    }
    if k == 0 {
        return Ok(true);
    }
    let jac: Vec<Vec<MultiPolyQ>> = family
        .iter()
        .map(|p| (0..nvars).map(|j| p.partial_derivative(j)).collect())
        .collect();
    let full_rank_at = |pt: &[Rational]| {
        Matrix::from_fn(k, nvars, |i, j| jac[i][j].eval(pt)).rank() == k
    };
    if jacobian_points(nvars, NUMERIC_POINTS).iter().any(|p| full_rank_at(p)) {
        return Ok(true);
    }
    if k <= SYMBOLIC_LIMIT {
        return Ok(symbolic_full_rank(&jac, nvars));
    }
    Ok(grid_full_rank(&jac, nvars, &full_rank_at))
}

fn symbolic_full_rank(jac: &[Vec<MultiPolyQ>], nvars: usize) -> bool {
    let k = jac.len();
    column_subsets(nvars, k).into_iter().any(|cols| {
        let minor: Vec<Vec<&MultiPolyQ>> = jac
            .iter()
            .map(|row| cols.iter().map(|&c| &row[c]).collect())
            .collect();
        !laplace_det(&minor, nvars).is_zero()
    })
}

fn column_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            cur.push(c);
            rec(c + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn laplace_det(m: &[Vec<&MultiPolyQ>], nvars: usize) -> MultiPolyQ {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPolyQ::zero(nvars);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let sub: Vec<Vec<&MultiPolyQ>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| *p).collect())
            .collect();
        let term = m[0][j].mul(&laplace_det(&sub, nvars));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// A nonzero polynomial of degree at most `D_i` in `x_i` is nonzero somewhere
/// on `∏ {0..=D_i}`; the minors' degrees are bounded by row sums.
fn grid_full_rank(
    jac: &[Vec<MultiPolyQ>],
    nvars: usize,
    full_rank_at: &dyn Fn(&[Rational]) -> bool,
) -> bool {
    let bounds: Vec<u32> = (0..nvars)
        .map(|v| {
            jac.iter()
                .map(|row| row.iter().map(|p| p.degree_in(v)).max().unwrap_or(0))
                .sum()
        })
        .collect();
    let total: u64 = bounds.iter().map(|&b| b as u64 + 1).product();
    assert!(total <= GRID_LIMIT, "Jacobian grid search too large ({total} points)");
    let mut idx = vec![0u32; nvars];
    loop {
        let pt: Vec<Rational> = idx.iter().map(|&v| Rational::from_integer(v.into())).collect();
        if full_rank_at(&pt) {
            return true;
        }
        let mut i = 0;
        while i < nvars && idx[i] == bounds[i] {
            idx[i] = 0;
            i += 1;
        }
        if i == nvars {
            return false;
        }
        idx[i] += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn x(i: usize) -> MultiPolyQ {
        MultiPolyQ::var(2, i)
    }

    #[test]
    fn constants_examples() {
        let x1 = MultiPolyQ::var(1, 0);
        assert!(independence_with_constants(&[x1.clone(), x1.pow(2)]));
        assert!(!independence_with_constants(&[x1.clone(), x1.scale(&rat(2, 1))]));
        let sq = [x(0).pow(2).sub(&x(1).pow(2)), x(0).mul(&x(1)).scale(&rat(2, 1))];
        assert!(independence_with_constants(&sq));
        // constant shifts do not help
        assert!(!independence_with_constants(&[x1.clone(), x1.add(&MultiPolyQ::one(1))]));
    }

    #[test]
    fn jacobian_examples() {
        let sq = [x(0).pow(2).sub(&x(1).pow(2)), x(0).mul(&x(1)).scale(&rat(2, 1))];
        assert!(jacobian_alg_independence(&sq, 2).unwrap());
        assert!(!jacobian_alg_independence(&[x(0), x(0)], 2).unwrap());
        assert!(jacobian_alg_independence(&[x(0).add(&x(1)), x(0).sub(&x(1))], 2).unwrap());
        assert!(matches!(
            jacobian_alg_independence(&[x(0), x(1), x(0)], 2),
            Err(IntPolyError::TooManyPolynomials { got: 3, vars: 2 })
        ));
    }

    #[test]
    fn dependent_but_nonlinear() {
        // x and x^2 are algebraically dependent
        let f = [x(0), x(0).pow(2)];
        assert!(!jacobian_alg_independence(&f, 2).unwrap());
        assert!(symbolic_full_rank(
            &[vec![MultiPolyQ::one(2), MultiPolyQ::zero(2)], vec![MultiPolyQ::zero(2), x(0)]],
            2
        ));
    }

    #[test]
    fn point_sequence() {
        let p = jacobian_points(3, 3);
        assert_eq!(p[0], vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(p[1], vec![rat(1, 1), rat(2, 1), rat(4, 1)]);
        assert_eq!(p[2], vec![rat(1, 1), rat(3, 1), rat(9, 1)]);
    }

    #[test]
    fn grid_search_agrees() {
        let jac = vec![
            vec![x(0), MultiPolyQ::zero(2)],
            vec![MultiPolyQ::zero(2), x(1)],
        ];
        let f = |pt: &[Rational]| {
            Matrix::from_fn(2, 2, |i, j| jac[i][j].eval(pt)).rank() == 2
        };
        assert!(grid_full_rank(&jac, 2, &f));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn verdict_invariant_under_unimodular_change(
            coeffs in proptest::collection::vec(-3i64..4, 9),
            ops in proptest::collection::vec((0usize..3, 0usize..3, -2i64..3), 1..6),
        ) {
            let vars = 2;
            let monos = [
                MultiPolyQ::var(vars, 0),
                MultiPolyQ::var(vars, 1),
                MultiPolyQ::var(vars, 0).mul(&MultiPolyQ::var(vars, 1)),
            ];
            let mut fam: Vec<MultiPolyQ> = (0..3)
                .map(|i| {
                    (0..3).fold(MultiPolyQ::zero(vars), |acc, j| {
                        acc.add(&monos[j].scale(&rat(coeffs[3 * i + j], 1)))
                    })
                })
                .collect();
            let before = independence_with_constants(&fam);
            for (a, b, c) in ops {
                if a != b {
                    let t = fam[b].scale(&rat(c, 1));
                    fam[a] = fam[a].add(&t);
                }
            }
            prop_assert_eq!(before, independence_with_constants(&fam));
        }
    }
}
