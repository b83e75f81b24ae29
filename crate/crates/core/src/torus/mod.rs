//! Commuting unipotent affine actions on tori: polynomial orbits, their
//! closures, simultaneous triangularization and Weyl-sum checks.

mod affine;
mod closure;
mod sequence;
mod symbolic;
mod triangular;
mod weyl;

use thiserror::Error;

pub use affine::{closed_form_orbit, exponent_values, AffineSystem, AffineUnipotentMap};
pub use closure::{e, orbit_closure, Coset, SubtorusCosetUnion, MAX_CLASSES};
pub use sequence::{PhasePolynomial, PolynomialTorusSequence};
pub use symbolic::{
    matrix_apply, matrix_apply_real, Generator, Generators, Phase, SymPoly, SymbolicReal, SymbolicRealText,
};
pub use triangular::{simultaneous_triangularize, Orientation, Triangularization};
pub use weyl::{
    characters, equidistribution_report, tolerance, weyl_average, CharacterClass, EquidistributionReport,
    FolnerBox, ReportConfig, ReportRow,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("maps do not commute")]
    NonCommuting,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("translation refers to an undeclared generator")]
    UnknownGenerator,
    #[error("exponent polynomial {0} is not integer-valued")]
    ExponentNotIntegerValued(usize),
    #[error("empty averaging box")]
    EmptyBox,
    #[error("too many congruence classes to enumerate")]
    CongruenceTooLarge,
}
