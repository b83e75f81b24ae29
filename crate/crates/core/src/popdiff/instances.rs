//! Deterministic test sets. Every generator constrains the first
//! coordinate only; the other coordinates are free.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GridSet, PopDiffError};
use crate::Rational;

/// `x_0 ∈ [lo, hi)`.
pub fn interval(d: usize, side: usize, lo: usize, hi: usize) -> Result<GridSet, PopDiffError> {
    GridSet::from_predicate(d, side, |x| (lo..hi).contains(&x[0]))
}

/// `x_0 mod modulus ∈ residues`.
pub fn residue_classes(d: usize, side: usize, modulus: usize, residues: &[usize]) -> Result<GridSet, PopDiffError> {
    if modulus == 0 {
        return Err(PopDiffError::Format("modulus 0".into()));
    }
    GridSet::from_predicate(d, side, |x| residues.contains(&(x[0] % modulus)))
}

/// `x_0` is a square modulo `N`, zero included.
pub fn quadratic_residues(d: usize, side: usize) -> Result<GridSet, PopDiffError> {
    let mut squares = vec![false; side];
    for y in 0..side as u64 {
        squares[(y * y % side as u64) as usize] = true;
    }
    GridSet::from_predicate(d, side, |x| squares[x[0]])
}

/// Bohr set `{x : ‖x_0 θ‖ < width}`.
pub fn bohr(d: usize, side: usize, theta: &Rational, width: &Rational) -> Result<GridSet, PopDiffError> {
    // ‖xθ‖ < w  ⇔  frac(xθ) < w or frac(xθ) > 1 - w
    let one = Rational::from_integer(1.into());
    GridSet::from_predicate(d, side, |x| {
        let v = theta * Rational::from_integer((x[0] as i64).into());
        let f = &v - Rational::from_integer(v.floor().to_integer());
        f < *width || f > &one - width
    })
}

/// Each cell independently with probability `delta`, from ChaCha8 seeded
/// by `seed`. Refuses draws more than `4 sqrt(N^d δ(1-δ))` off the mean.
pub fn random(d: usize, side: usize, delta: f64, seed: u64) -> Result<GridSet, PopDiffError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = super::check_shape(d, side)?;
    let delta = delta.clamp(0.0, 1.0);
    let g = GridSet::from_flat(d, side, (0..cells).filter(|_| rng.gen_bool(delta)))?;
    let mean = cells as f64 * delta;
    let sigma = (cells as f64 * delta * (1.0 - delta)).sqrt();
    if (g.popcount() as f64 - mean).abs() > 4.0 * sigma {
        return Err(PopDiffError::Concentration {
            got: g.popcount(),
            expected: mean,
        });
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn exact_densities() {
        assert_eq!(residue_classes(1, 99, 3, &[0]).unwrap().density(), rat(1, 3));
        assert_eq!(interval(1, 64, 0, 32).unwrap().density(), rat(1, 2));
        assert_eq!(interval(2, 10, 0, 5).unwrap().density(), rat(1, 2));
        // squares mod 11: 0 and five nonzero residues
        assert_eq!(quadratic_residues(1, 11).unwrap().popcount(), 6);
        assert_eq!(bohr(1, 10, &rat(1, 10), &rat(1, 5)).unwrap().popcount(), 3);
    }

    #[test]
    fn random_is_seeded_and_concentrated() {
        let a = random(2, 64, 0.5, 3).unwrap();
        assert_eq!(a, random(2, 64, 0.5, 3).unwrap());
        assert_ne!(a, random(2, 64, 0.5, 4).unwrap());
        let dev = (a.popcount() as f64 - 2048.0).abs();
        assert!(dev <= 4.0 * (4096.0f64 * 0.25).sqrt());
    }
}
