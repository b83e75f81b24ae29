//! Cesàro averages of `∫ f_0(x) f_1(x + r p(n) α) f_2(x + s p(n) α) dx`
//! against the integral over the subgroup `{(ru, su)}`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::DynError;
use crate::circle::{integrate_shifted_product, IntervalSet, StepFunction};
use crate::scalar::rat_to_f64;
use crate::{QuadraticQ, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum LimitFunction {
    Step(StepFunction<Rational>),
    /// `x ↦ e(kx)`.
    Character(i64),
}

impl LimitFunction {
    pub fn one() -> Self {
        LimitFunction::Step(StepFunction::constant(<Rational as One>::one()))
    }

    pub fn indicator(set: &IntervalSet<Rational>) -> Self {
        LimitFunction::Step(StepFunction::indicator(set))
    }

    fn step_part(&self) -> StepFunction<Rational> {
        match self {
            LimitFunction::Step(f) => f.clone(),
            LimitFunction::Character(_) => StepFunction::constant(<Rational as One>::one()),
        }
    }

    fn frequency(&self) -> i64 {
        match self {
            LimitFunction::Step(_) => 0,
            LimitFunction::Character(k) => *k,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KroneckerRow {
    pub n: u64,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KroneckerCheck {
    pub rows: Vec<KroneckerRow>,
    /// Exact subgroup integral when every function is a step function.
    pub rhs_exact: Option<String>,
    /// The gap never grows along the ladder.
    pub gap_non_increasing: bool,
}

impl KroneckerCheck {
    pub fn final_gap(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.gap)
    }
}

fn eval_poly(p: &[i64], n: i64) -> BigInt {
    let x = BigInt::from(n);
    p.iter().rev().fold(BigInt::zero(), |acc, &c| acc * &x + BigInt::from(c))
}

/// Parameters `u ∈ [0, 1)` at which two breakpoints of `f_i(z + c_i u)`
/// and `f_j(z + c_j u)` meet, plus 0 and 1.
fn structural_points(fs: &[StepFunction<Rational>; 3], coeffs: [i64; 3]) -> Vec<Rational> {
    let mut out = vec![<Rational as Zero>::zero(), <Rational as One>::one()];
    for i in 0..3 {
        for j in i + 1..3 {
            let c = coeffs[j] - coeffs[i];
            if c == 0 {
                continue;
            }
            for (bi, _) in fs[i].pieces() {
                for (bj, _) in fs[j].pieces() {
                    // b_i - c_i u ≡ b_j - c_j u  ⇔  c u ≡ b_j - b_i
                    let delta = bj - bi;
                    for m in -(c.abs() + 2)..=(c.abs() + 2) {
                        let u = (delta.clone() + Rational::from_integer(m.into())) / Rational::from_integer(c.into());
                        if u >= <Rational as Zero>::zero() && u < <Rational as One>::one() {
                            out.push(u);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn inner_exact(fs: &[StepFunction<Rational>; 3], coeffs: [i64; 3], u: &Rational) -> Rational {
    let shifts: Vec<Rational> = coeffs.iter().map(|&c| crate::circle::CircleCoord::frac(&(u * Rational::from_integer(c.into())))).collect();
    integrate_shifted_product(&[(&fs[0], shifts[0].clone()), (&fs[1], shifts[1].clone()), (&fs[2], shifts[2].clone())])
}

/// `∫_0^1 ∫ f_0(z) f_1(z + ru) f_2(z + su) dz du`, exact: the inner integral
/// is linear in `u` between structural points.
fn subgroup_integral_exact(fs: &[StepFunction<Rational>; 3], r: i64, s: i64) -> Rational {
    let coeffs = [0, r, s];
    let pts = structural_points(fs, coeffs);
    let vals: Vec<Rational> = pts.iter().map(|u| inner_exact(fs, coeffs, u)).collect();
    let half = Rational::new(1.into(), 2.into());
    pts.windows(2)
        .zip(vals.windows(2))
        .fold(<Rational as Zero>::zero(), |acc, (u, g)| {
            acc + (u[1].clone() - u[0].clone()) * (g[0].clone() + g[1].clone()) * half.clone()
        })
}

/// `∫_T Π_i f_i(x + t_i) dx` for step functions times characters.
fn integrate_mixed(steps: &[StepFunction<f64>; 3], freqs: [i64; 3], shifts: [f64; 3]) -> Complex64 {
    let total_freq: i64 = freqs.iter().sum();
    let phase: f64 = freqs.iter().zip(shifts).map(|(&k, t)| k as f64 * t).sum();
    let shifted: Vec<Vec<(f64, Rational)>> = steps.iter().zip(shifts).map(|(f, t)| f.shifted_pieces(&t)).collect();
    let mut points: Vec<f64> = shifted.iter().flat_map(|p| p.iter().map(|x| x.0)).collect();
    points.sort_by(|a, b| a.total_cmp(b));
    points.dedup();
    let mut total = Complex64::zero();
    let tau = std::f64::consts::TAU;
    for (i, &a) in points.iter().enumerate() {
        let b = points.get(i + 1).copied().unwrap_or(1.0);
        let mut v = 1.0;
        for f in &shifted {
            let idx = f.iter().rposition(|p| p.0 <= a).unwrap_or(0);
            v *= rat_to_f64(&f[idx].1);
        }
        if v == 0.0 {
            continue;
        }
        let piece = if total_freq == 0 {
            Complex64::new(b - a, 0.0)
        } else {
            let k = total_freq as f64;
            let ea = Complex64::from_polar(1.0, tau * k * a);
            let eb = Complex64::from_polar(1.0, tau * k * b);
            (eb - ea) / Complex64::new(0.0, tau * k)
        };
        total += piece * v;
    }
    total * Complex64::from_polar(1.0, tau * phase)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

pub fn kronecker_limit_check(
    alpha: &QuadraticQ,
    r: i64,
    s: i64,
    p: &[i64],
    fs: &[LimitFunction; 3],
    ladder: &[u64],
) -> Result<KroneckerCheck, DynError> {
    if r == s || r == 0 || s == 0 {
        return Err(DynError::DegenerateShifts);
    }
    let n_max = ladder.iter().copied().max().ok_or(DynError::EmptyRange)?;
    if n_max == 0 {
        return Err(DynError::EmptyRange);
    }
    let steps: [StepFunction<Rational>; 3] = [fs[0].step_part(), fs[1].step_part(), fs[2].step_part()];
    let freqs = [fs[0].frequency(), fs[1].frequency(), fs[2].frequency()];
    let exact = freqs.iter().all(|&k| k == 0);
    let shifts_at = |n: u64| {
        let pn = eval_poly(p, n as i64);
        let t1 = alpha.scale(&Rational::from_integer(&pn * BigInt::from(r))).frac();
        let t2 = alpha.scale(&Rational::from_integer(&pn * BigInt::from(s))).frac();
        (t1, t2)
    };

    let (values, rhs, rhs_exact): (Vec<Complex64>, Complex64, Option<String>) = if exact {
        let qsteps: Vec<StepFunction<QuadraticQ>> =
            steps.iter().map(|f| f.map_coords(|q| QuadraticQ::from_rational(q.clone()))).collect();
        let per_n: Vec<QuadraticQ> = (1..=n_max)
            .into_par_iter()
            .map(|n| {
                let (t1, t2) = shifts_at(n);
                integrate_shifted_product(&[
                    (&qsteps[0], QuadraticQ::from_int(0.into())),
                    (&qsteps[1], t1),
                    (&qsteps[2], t2),
                ])
            })
            .collect();
        let rhs = subgroup_integral_exact(&steps, r, s);
        // exact prefix sums, reported as floats
        let mut acc = QuadraticQ::from_int(0.into());
        let mut prefix = Vec::with_capacity(per_n.len());
        for v in per_n {
            acc = acc + v;
            prefix.push(Complex64::new(acc.to_f64(), 0.0));
        }
        (prefix, Complex64::new(rat_to_f64(&rhs), 0.0), Some(rhs.to_string()))
    } else {
        let fsteps: [StepFunction<f64>; 3] = [
            steps[0].map_coords(rat_to_f64),
            steps[1].map_coords(rat_to_f64),
            steps[2].map_coords(rat_to_f64),
        ];
        let per_n: Vec<Complex64> = (1..=n_max)
            .into_par_iter()
            .map(|n| {
                let (t1, t2) = shifts_at(n);
                integrate_mixed(&fsteps, freqs, [0.0, t1.to_f64(), t2.to_f64()])
            })
            .collect();
        let mut acc = Complex64::zero();
        let prefix: Vec<Complex64> = per_n
            .into_iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect();
        let pts = structural_points(&steps, [0, r, s]);
        let rule = gauss_legendre(16);
        let mut rhs = Complex64::zero();
        for w in pts.windows(2) {
            let (a, b) = (rat_to_f64(&w[0]), rat_to_f64(&w[1]));
            let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
            for &(x, wt) in &rule {
                let u = mid + half * x;
                let sh = [0.0, (r as f64 * u).rem_euclid(1.0), (s as f64 * u).rem_euclid(1.0)];
                rhs += integrate_mixed(&fsteps, freqs, sh) * (wt * half);
            }
        }
        (prefix, rhs, None)
    };

    let mut rows = Vec::new();
    let mut sorted = ladder.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for n in sorted.into_iter().filter(|&n| n > 0) {
        let lhs = values[(n - 1) as usize] / n as f64;
        rows.push(KroneckerRow {
            n,
            lhs_re: lhs.re,
            lhs_im: lhs.im,
            rhs_re: rhs.re,
            rhs_im: rhs.im,
            gap: (lhs - rhs).norm(),
        });
    }
    let gap_non_increasing = rows.windows(2).all(|w| w[1].gap <= w[0].gap);
    Ok(KroneckerCheck {
        rows,
        rhs_exact,
        gap_non_increasing,
    })
}
