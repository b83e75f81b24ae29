//! Hermite normal form over the integers and the lattice routines built
//! on it: integer kernels, saturation and fundamental-domain reduction.

use num_traits::Zero;

use crate::linalg::Matrix;
use crate::scalar::IntScalar;

/// `transform * input = hnf`, with `transform` unimodular.
///
/// `hnf` is in row echelon form: the first `rank` rows are nonzero, each
/// pivot is positive, and entries above a pivot lie in `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct RowHnf<I> {
    pub hnf: Matrix<I>,
    pub transform: Matrix<I>,
    pub pivots: Vec<usize>,
}

impl<I> RowHnf<I> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn row_combine<I: IntScalar>(m: &mut Matrix<I>, target: usize, source: usize, factor: &I) {
    if factor.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let v = m[(source, j)].clone() * factor.clone();
        m[(target, j)] = m[(target, j)].clone() - v;
    }
}

fn row_negate<I: IntScalar>(m: &mut Matrix<I>, r: usize) {
    for j in 0..m.cols() {
        m[(r, j)] = -m[(r, j)].clone();
    }
}

pub fn row_hnf<I: IntScalar>(input: &Matrix<I>) -> RowHnf<I> {
    let (rows, cols) = (input.rows(), input.cols());
    let mut h = input.clone();
    let mut u = Matrix::<I>::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // gcd-reduce column c below row r down to a single nonzero entry
        loop {
            let best = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                row_combine(&mut h, i, r, &q);
                row_combine(&mut u, i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            row_negate(&mut h, r);
            row_negate(&mut u, r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            row_combine(&mut h, i, r, &q);
            row_combine(&mut u, i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    RowHnf {
        hnf: h,
        transform: u,
        pivots,
    }
}

/// Z-basis (as rows) of the integer kernel `{x in Z^n : a x = 0}`.
pub fn integer_kernel<I: IntScalar>(a: &Matrix<I>) -> Vec<Vec<I>> {
    let t = row_hnf(&a.transpose());
    (t.rank()..t.transform.rows())
        .map(|i| t.transform.row(i).to_vec())
        .collect()
}

/// Canonical HNF basis (rows) of the saturated lattice `span_Q(vectors) ∩ Z^m`.
pub fn saturated_basis<I: IntScalar>(vectors: &[Vec<I>], m: usize) -> Vec<Vec<I>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let v = Matrix::from_rows(vectors.to_vec());
    let annihilator = integer_kernel(&v);
    let sat = if annihilator.is_empty() {
        (0..m)
            .map(|i| (0..m).map(|j| if i == j { I::one() } else { I::zero() }).collect())
            .collect()
    } else {
        integer_kernel(&Matrix::from_rows(annihilator))
    };
    if sat.is_empty() {
        return sat;
    }
    let h = row_hnf(&Matrix::from_rows(sat));
    (0..h.rank()).map(|i| h.hnf.row(i).to_vec()).collect()
}

/// Full-rank lattice in `Z^d` stored by its upper-triangular HNF basis rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice<I> {
    basis: Matrix<I>,
}

impl<I: IntScalar> Lattice<I> {
    /// Lattice spanned by the given generator columns; `None` if not full rank.
    pub fn from_columns(generators: &Matrix<I>) -> Option<Self> {
        let d = generators.rows();
        let h = row_hnf(&generators.transpose());
        if h.rank() != d {
            return None;
        }
        let basis = Matrix::from_fn(d, d, |i, j| h.hnf[(i, j)].clone());
        Some(Lattice { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Rows of the upper-triangular basis.
    pub fn basis(&self) -> &Matrix<I> {
        &self.basis
    }

    pub fn index(&self) -> I {
        (0..self.dim()).fold(I::one(), |acc, i| acc * self.basis[(i, i)].clone())
    }

    /// Canonical representative of `v` modulo the lattice: each coordinate
    /// `i` lands in `[0, h_ii)`.
    pub fn reduce(&self, v: &[I]) -> Vec<I> {
        let mut x = v.to_vec();
        for i in 0..self.dim() {
            let q = x[i].div_floor(&self.basis[(i, i)]);
            if q.is_zero() {
                continue;
            }
            for (j, xj) in x.iter_mut().enumerate().skip(i) {
                *xj = xj.clone() - q.clone() * self.basis[(i, j)].clone();
            }
        }
        x
    }

    pub fn contains(&self, v: &[I]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// All points of the box `0 <= x_i < h_ii`, a complete residue system.
    /// Enumerated in lexicographic order starting from the origin.
    pub fn fundamental_domain(&self) -> Vec<Vec<I>> {
        let d = self.dim();
        let mut out = vec![Vec::new()];
        for i in 0..d {
            let bound = self.basis[(i, i)].clone();
            let mut next = Vec::new();
            for prefix in &out {
                let mut k = I::zero();
                while k < bound {
                    let mut p: Vec<I> = prefix.clone();
                    p.push(k.clone());
                    next.push(p);
                    k = k + I::one();
                }
            }
            out = next;
        }
        out
    }
}
