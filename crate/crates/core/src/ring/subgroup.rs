//! Principal finite-index subgroups `rO_K` of the ring of integers.

use num_traits::Signed;

use super::{AlgebraicInteger, NumberField, RingError};
use crate::hnf::Lattice;
use crate::linalg::Matrix;
use crate::{Integer, QMatrix};

/// The lattice `rO_K`, spanned by the columns of `M_r`.
#[derive(Clone, Debug)]
pub struct PrincipalSubgroup {
    generator: AlgebraicInteger,
    columns: Matrix<Integer>,
    inverse: QMatrix,
    lattice: Lattice<Integer>,
    index: Integer,
}

impl PrincipalSubgroup {
    pub fn new(field: &NumberField, r: &AlgebraicInteger) -> Result<Self, RingError> {
        field.check(r.as_number())?;
        if r.is_zero() {
            return Err(RingError::ZeroDivisor);
        }
        let m = field.mult_matrix(r.as_number())?;
        let columns = m
            .to_integer_matrix()
            .expect("multiplication by an algebraic integer is integral");
        let inverse = m.0.inverse().ok_or(RingError::ZeroDivisor)?;
        let lattice = Lattice::from_columns(&columns).ok_or(RingError::ZeroDivisor)?;
        let index = m.0.det().abs().to_integer();
        debug_assert_eq!(index, lattice.index());
        Ok(PrincipalSubgroup {
            generator: r.clone(),
            columns,
            inverse,
            lattice,
            index,
        })
    }

    pub fn generator(&self) -> &AlgebraicInteger {
        &self.generator
    }

    /// Lattice generators `M_r e_i` as columns.
    pub fn columns(&self) -> &Matrix<Integer> {
        &self.columns
    }

    pub fn hnf(&self) -> &Lattice<Integer> {
        &self.lattice
    }

    /// `[O_K : rO_K] = |N(r)|`.
    pub fn index(&self) -> &Integer {
        &self.index
    }

    /// Decides `n ∈ rO_K` by solving `M_r x = coords(n)` and testing integrality.
    pub fn contains(&self, field: &NumberField, n: &AlgebraicInteger) -> Result<bool, RingError> {
        field.check(n.as_number())?;
        Ok(self.contains_coords(n.as_number().coords()))
    }

    pub(crate) fn contains_coords(&self, coords: &[crate::Rational]) -> bool {
        self.inverse
            .mul_vec(coords)
            .iter()
            .all(|x| x.is_integer())
    }

    /// Canonical representative of `n` modulo `rO_K`.
    pub fn reduce(&self, field: &NumberField, n: &AlgebraicInteger) -> AlgebraicInteger {
        let coords = self.lattice.reduce(&n.coords());
        field.integer(&coords).expect("dimension preserved")
    }

    /// The HNF box `0 <= x_i < h_ii`, exactly `|N(r)|` elements, starting at 0.
    pub fn residues(&self, field: &NumberField) -> Vec<AlgebraicInteger> {
        self.lattice
            .fundamental_domain()
            .into_iter()
            .map(|c| field.integer(&c).expect("dimension preserved"))
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.index == Integer::from(1)
    }
}

impl PartialEq for PrincipalSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice
    }
}
