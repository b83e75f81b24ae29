//! Simultaneous triangularization of commuting unipotent integer matrices
//! by a unimodular change of basis.

use super::TorusError;
use crate::hnf::row_hnf;
use crate::linalg::Matrix;
use crate::scalar::denominator_lcm;
use crate::{Integer, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Upper,
    Lower,
}

/// `A_j P = P B_j` for every input `A_j`, with `P` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangularization {
    pub p: Matrix<Integer>,
    pub blocks: Vec<Matrix<Integer>>,
}

fn to_q(a: &Matrix<Integer>) -> Matrix<Rational> {
    a.map(|v| Rational::from_integer(v.clone()))
}

fn nullspace_of_rows(rows: Vec<Vec<Rational>>, m: usize) -> Vec<Vec<Rational>> {
    if rows.is_empty() {
        return (0..m)
            .map(|i| (0..m).map(|j| Rational::from_integer(((i == j) as i64).into())).collect())
            .collect();
    }
    Matrix::from_rows(rows).nullspace()
}

/// Columns adapted to the flag `K_1 ⊂ K_2 ⊂ …`, where `K_1` is the common
/// kernel of the `A_j - I` and `K_{t+1} = {x : (A_j - I)x ∈ K_t}`.
fn flag_basis(nil: &[Matrix<Rational>], m: usize) -> Vec<Vec<Rational>> {
    let mut cols: Vec<Vec<Rational>> = Vec::new();
    // rows whose common kernel is the current K_t (K_0 = 0)
    let mut annihilator: Vec<Vec<Rational>> = Matrix::<Rational>::identity(m).to_rows();
    while cols.len() < m {
        let mut stacked = Vec::new();
        for n in nil {
            if !annihilator.is_empty() {
                stacked.extend(Matrix::from_rows(annihilator.clone()).mul(n).to_rows());
            }
        }
        let level = nullspace_of_rows(stacked, m);
        let before = cols.len();
        for v in &level {
            let mut trial = cols.clone();
            trial.push(v.clone());
            if Matrix::from_rows(trial.clone()).rank() == trial.len() {
                cols = trial;
            }
        }
        assert!(cols.len() > before, "flag did not grow; matrices not unipotent");
        annihilator = nullspace_of_rows(level, m);
    }
    cols
}

pub fn simultaneous_triangularize(
    matrices: &[Matrix<Integer>],
    orientation: Orientation,
) -> Result<Triangularization, TorusError> {
    let Some(first) = matrices.first() else {
        return Err(TorusError::DimensionMismatch);
    };
    let m = first.rows();
    for a in matrices {
        if !a.is_square() || a.rows() != m {
            return Err(TorusError::DimensionMismatch);
        }
        if !a.minus_identity().pow(m as u32).is_zero_matrix() {
            return Err(TorusError::NotUnipotent);
        }
    }
    for (i, a) in matrices.iter().enumerate() {
        for b in &matrices[i + 1..] {
            if a.mul(b) != b.mul(a) {
                return Err(TorusError::NonCommuting);
            }
        }
    }
    let nil: Vec<Matrix<Rational>> = matrices.iter().map(|a| to_q(&a.minus_identity())).collect();
    let cols = flag_basis(&nil, m);
    let int_cols: Vec<Vec<Integer>> = cols
        .iter()
        .map(|c| {
            let l = Rational::from_integer(denominator_lcm(c.iter()));
            c.iter().map(|q| (q.clone() * l.clone()).to_integer()).collect()
        })
        .collect();
    let w = Matrix::from_columns(&int_cols);
    let h = row_hnf(&w);
    let mut p = to_q(&h.transform)
        .inverse()
        .expect("unimodular transform")
        .map(|q| q.to_integer());
    if orientation == Orientation::Lower {
        p = p.reverse_columns();
    }
    let p_inv = to_q(&p).inverse().expect("unimodular").map(|q| q.to_integer());
    let blocks: Vec<Matrix<Integer>> = matrices.iter().map(|a| p_inv.mul(a).mul(&p)).collect();
    for b in &blocks {
        let ok = match orientation {
            Orientation::Upper => b.is_upper_triangular(),
            Orientation::Lower => b.is_lower_triangular(),
        };
        debug_assert!(ok && b.is_unipotent());
    }
    Ok(Triangularization { p, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zm(rows: &[&[i64]]) -> Matrix<Integer> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Integer::from(v)).collect()).collect())
    }

    fn check(t: &Triangularization, mats: &[Matrix<Integer>], o: Orientation) {
        for (a, b) in mats.iter().zip(&t.blocks) {
            assert_eq!(a.mul(&t.p), t.p.mul(b));
            assert!(b.is_unipotent());
            match o {
                Orientation::Upper => assert!(b.is_upper_triangular()),
                Orientation::Lower => assert!(b.is_lower_triangular()),
            }
        }
        let det = to_q(&t.p).det();
        assert!(det == Rational::from_integer(1.into()) || det == Rational::from_integer((-1).into()));
    }

    #[test]
    fn already_lower_triangular() {
        let a = zm(&[&[1, 0], &[1, 1]]);
        let t = simultaneous_triangularize(std::slice::from_ref(&a), Orientation::Lower).unwrap();
        assert_eq!(t.p, Matrix::identity(2));
        check(&t, &[a], Orientation::Lower);
    }

    #[test]
    fn non_triangular_example() {
        let a = zm(&[&[3, -4], &[1, -1]]);
        let t = simultaneous_triangularize(std::slice::from_ref(&a), Orientation::Lower).unwrap();
        assert_eq!(t.p, zm(&[&[1, 2], &[0, 1]]));
        assert_eq!(t.blocks[0], zm(&[&[1, 0], &[1, 1]]));
        check(&t, std::slice::from_ref(&a), Orientation::Lower);
        let up = simultaneous_triangularize(std::slice::from_ref(&a), Orientation::Upper).unwrap();
        check(&up, &[a], Orientation::Upper);
    }

    #[test]
    fn identity_with_another() {
        let a = zm(&[&[3, -4], &[1, -1]]);
        let i = Matrix::identity(2);
        let both = simultaneous_triangularize(&[i.clone(), a.clone()], Orientation::Lower).unwrap();
        let alone = simultaneous_triangularize(std::slice::from_ref(&a), Orientation::Lower).unwrap();
        assert_eq!(both.p, alone.p);
        check(&both, &[i, a], Orientation::Lower);
    }

    #[test]
    fn errors() {
        let a = zm(&[&[1, 1], &[0, 1]]);
        let b = zm(&[&[1, 0], &[1, 1]]);
        assert_eq!(
            simultaneous_triangularize(&[a, b], Orientation::Upper).unwrap_err(),
            TorusError::NonCommuting
        );
        assert_eq!(
            simultaneous_triangularize(&[zm(&[&[2, 0], &[0, 1]])], Orientation::Upper).unwrap_err(),
            TorusError::NotUnipotent
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        /// Conjugates of commuting upper unitriangular matrices by random
        /// unimodular matrices.
        #[test]
        fn conjugated_commuting_pairs(
            x in -3i64..4, y in -3i64..4, z in -3i64..4,
            ops in proptest::collection::vec((0usize..3, 0usize..3, -2i64..3), 0..6),
            lower in any::<bool>(),
        ) {
            // polynomials in one nilpotent N commute
            let n = zm(&[&[0, x, y], &[0, 0, z], &[0, 0, 0]]);
            let i3 = Matrix::<Integer>::identity(3);
            let a1 = i3.add(&n);
            let a2 = i3.add(&n.mul(&n)).add(&n).add(&n);
            let mut g = Matrix::<Integer>::identity(3);
            for (r, s, c) in ops {
                if r != s {
                    let mut e = Matrix::<Integer>::identity(3);
                    e[(r, s)] = Integer::from(c);
                    g = g.mul(&e);
                }
            }
            let gi = to_q(&g).inverse().unwrap().map(|q| q.to_integer());
            let mats = vec![g.mul(&a1).mul(&gi), g.mul(&a2).mul(&gi)];
            let o = if lower { Orientation::Lower } else { Orientation::Upper };
            let t = simultaneous_triangularize(&mats, o).unwrap();
            check(&t, &mats, o);
        }
    }
}
