use num_traits::Zero;
use proptest::prelude::*;

use okdyn::torus::{
    closed_form_orbit, exponent_values, orbit_closure, AffineSystem, AffineUnipotentMap, Generator, Generators,
    PolynomialTorusSequence, SymbolicReal,
};
use okdyn::{MultiPolyQ, Rational};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn upoly(coeffs: &[(i64, i64)]) -> MultiPolyQ {
    let cs: Vec<Rational> = coeffs.iter().map(|&(n, d)| rat(n, d)).collect();
    MultiPolyQ::univariate(&cs)
}

#[test]
fn closed_form_matches_iteration() {
    let map = AffineUnipotentMap::from_i64(
        &[&[1, 0, 0], &[2, 1, 0], &[0, 1, 1]],
        vec![
            SymbolicReal::generator(0, rat(1, 1)),
            SymbolicReal::rational(rat(1, 3)),
            SymbolicReal::generator(1, rat(-1, 2)),
        ],
    )
    .unwrap();
    let sys = AffineSystem::new(vec![map], 2).unwrap();
    let x0 = vec![
        SymbolicReal::rational(rat(1, 7)),
        SymbolicReal::generator(1, rat(1, 1)),
        SymbolicReal::zero(),
    ];
    // exponent n(n + 7)/2
    let p = upoly(&[(0, 1), (7, 2), (1, 2)]);
    let u = closed_form_orbit(&sys, std::slice::from_ref(&p), &x0).unwrap();
    for n in -20i64..=20 {
        let k = exponent_values(std::slice::from_ref(&p), &[n]);
        let direct = sys.iterate(&x0, &k);
        let closed = u.eval(&[n]);
        assert!(direct.iter().zip(&closed).all(|(a, b)| a.eq_mod1(b)), "n = {n}");
    }
}

#[test]
fn orbit_points_sit_on_their_cosets() {
    let s2 = Generators::new(vec![Generator::sqrt(2).unwrap()]);
    // (n/2 + nα, n²α + n/3, 2nα)
    let u = PolynomialTorusSequence::from_parts(vec![
        vec![upoly(&[(0, 1), (1, 2)]), upoly(&[(0, 1), (1, 1)])],
        vec![upoly(&[(0, 1), (1, 3)]), upoly(&[(0, 1), (0, 1), (1, 1)])],
        vec![MultiPolyQ::zero(1), upoly(&[(0, 1), (2, 1)])],
    ]);
    let closure = orbit_closure(&u).unwrap();
    assert_eq!(closure.subspace_dim(), 2);
    assert!(!closure.cosets().is_empty());
    let samples: Vec<Vec<i64>> = (-60..=60).map(|n| vec![n]).collect();
    assert!(closure.membership_distance(&u, &s2, &samples) < 1e-9);
}

fn coeff() -> impl Strategy<Value = (i64, i64)> {
    (-4i64..=4, 1i64..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn subtorus_is_shift_invariant(
        rational in prop::collection::vec(prop::collection::vec(coeff(), 3), 2),
        irrational in prop::collection::vec(prop::collection::vec(coeff(), 3), 2),
        s in -9i64..=9,
    ) {
        let parts: Vec<Vec<MultiPolyQ>> = rational
            .iter()
            .zip(&irrational)
            .map(|(r, a)| vec![upoly(r), upoly(a)])
            .collect();
        let u = PolynomialTorusSequence::from_parts(parts);
        let base = orbit_closure(&u).unwrap();
        let shifted = orbit_closure(&u.shift(&[s])).unwrap();
        prop_assert_eq!(base.subspace_basis(), shifted.subspace_basis());
        prop_assert_eq!(base.cosets().len(), shifted.cosets().len());
        prop_assert!(base.subspace_basis().iter().all(|v| !v.iter().all(Zero::is_zero)));
    }
}
