//! Character averages over Følner boxes and the equidistribution report.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::closure::{e, SubtorusCosetUnion};
use super::sequence::PhasePolynomial;
use super::symbolic::Generators;
use super::{PolynomialTorusSequence, TorusError};

/// Points per parallel chunk; fixed so the summation tree does not depend
/// on the thread count.
const CHUNK: u64 = 1 << 14;

/// Inclusive integer box `∏ [lo_i, hi_i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FolnerBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl FolnerBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        FolnerBox { lo, hi }
    }

    /// `[-n, n]^d`.
    pub fn centered(d: usize, n: i64) -> Self {
        Self::new(vec![-n; d], vec![n; d])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn size(&self) -> u64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&a, &b)| if b < a { 0 } else { (b - a + 1) as u64 })
            .product()
    }

    /// Point with linear index `k` (last coordinate fastest).
    fn point(&self, mut k: u64, out: &mut [i64]) {
        for i in (0..self.dim()).rev() {
            let side = (self.hi[i] - self.lo[i] + 1) as u64;
            out[i] = self.lo[i] + (k % side) as i64;
            k /= side;
        }
    }
}

/// Kahan–Babuška (Neumaier) summation of complex terms.
#[derive(Clone, Copy, Default)]
struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    fn add(&mut self, x: Complex64) {
        let re = neumaier(self.sum.re, x.re, &mut self.comp.re);
        let im = neumaier(self.sum.im, x.im, &mut self.comp.im);
        self.sum = Complex64::new(re, im);
    }

    fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn neumaier(sum: f64, x: f64, comp: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *comp += (sum - t) + x;
    } else {
        *comp += (x - t) + sum;
    }
    t
}

fn box_average(phase: &PhasePolynomial, bx: &FolnerBox) -> Complex64 {
    let size = bx.size();
    let chunks = size.div_ceil(CHUNK);
    let partial: Vec<Complex64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = CompensatedSum::default();
            let mut pt = vec![0i64; bx.dim()];
            for k in c * CHUNK..((c + 1) * CHUNK).min(size) {
                bx.point(k, &mut pt);
                acc.add(e(phase.eval(&pt)));
            }
            acc.value()
        })
        .collect();
    let mut total = CompensatedSum::default();
    for p in partial {
        total.add(p);
    }
    total.value() / size as f64
}

/// `(1/|B|) Σ_{n∈B} e(c · u(n))`.
pub fn weyl_average(
    c: &[i64],
    u: &PolynomialTorusSequence,
    gens: &Generators,
    bx: &FolnerBox,
) -> Result<Complex64, TorusError> {
    if c.len() != u.dim() || bx.dim() != u.nvars() {
        return Err(TorusError::DimensionMismatch);
    }
    if bx.size() == 0 {
        return Err(TorusError::EmptyBox);
    }
    if c.iter().all(|&k| k == 0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let phase = PhasePolynomial::new(&u.character_phase(c), gens);
    Ok(box_average(&phase, bx))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportConfig {
    pub c_max: i64,
    /// Half-widths `N` of the boxes `[-N, N]^d`, increasing.
    pub ladder: Vec<i64>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            c_max: 3,
            ladder: vec![1_000, 10_000, 100_000],
        }
    }
}

/// How a character is judged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacterClass {
    /// Constant on every coset: the average equals the predicted value.
    Exact,
    /// Kills `V` but varies with the congruence class.
    Congruence,
    /// Does not kill `V`: the average decays to zero.
    Decaying,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub character: Vec<i64>,
    pub class: CharacterClass,
    pub n: i64,
    pub predicted_re: f64,
    pub predicted_im: f64,
    pub measured_re: f64,
    pub measured_im: f64,
    /// `|measured - predicted|`.
    pub deviation: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquidistributionReport {
    pub rows: Vec<ReportRow>,
}

impl EquidistributionReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

/// Tolerance `max(0.02, 5/√|B|^{1/d})` used on the largest box.
pub fn tolerance(n: i64) -> f64 {
    let side = (2 * n + 1) as f64;
    0.02f64.max(5.0 / side.sqrt())
}

const EXACT_TOLERANCE: f64 = 1e-12;

/// Nonzero characters with `|c|_∞ <= c_max`, in lexicographic order.
pub fn characters(m: usize, c_max: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-c_max..=c_max).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out.retain(|c| c.iter().any(|&k| k != 0));
    out
}

pub fn equidistribution_report(
    u: &PolynomialTorusSequence,
    closure: &SubtorusCosetUnion,
    gens: &Generators,
    config: &ReportConfig,
) -> Result<EquidistributionReport, TorusError> {
    if closure.dim() != u.dim() {
        return Err(TorusError::DimensionMismatch);
    }
    let d = u.nvars();
    let largest = config.ladder.iter().copied().max().unwrap_or(0);
    let mut rows = Vec::new();
    for c in characters(u.dim(), config.c_max) {
        let class = if closure.constant_on_cosets(&c) {
            CharacterClass::Exact
        } else if closure.annihilates(&c) {
            CharacterClass::Congruence
        } else {
            CharacterClass::Decaying
        };
        let predicted = closure.predicted_average(&c, gens);
        let phase = PhasePolynomial::new(&u.character_phase(&c), gens);
        for &n in &config.ladder {
            let bx = FolnerBox::centered(d, n);
            if bx.size() == 0 {
                return Err(TorusError::EmptyBox);
            }
            let measured = box_average(&phase, &bx);
            let deviation = (measured - predicted).norm();
            let bound = match class {
                CharacterClass::Exact => EXACT_TOLERANCE,
                _ if n == largest => tolerance(n),
                _ => 1.5 * tolerance(n),
            };
            rows.push(ReportRow {
                character: c.clone(),
                class,
                n,
                predicted_re: predicted.re,
                predicted_im: predicted.im,
                measured_re: measured.re,
                measured_im: measured.im,
                deviation,
                bound,
                pass: deviation <= bound,
            });
        }
    }
    Ok(EquidistributionReport { rows })
}

#[cfg(test)]
mod tests {
    use super::super::closure::orbit_closure;
    use super::super::symbolic::Generator;
    use super::*;
    use crate::scalar::rat;
    use crate::MultiPolyQ;

    fn sqrt2() -> Generators {
        Generators::new(vec![Generator::sqrt(2).unwrap()])
    }

    fn n() -> MultiPolyQ {
        MultiPolyQ::var(1, 0)
    }

    fn z() -> MultiPolyQ {
        MultiPolyQ::zero(1)
    }

    fn line() -> PolynomialTorusSequence {
        PolynomialTorusSequence::from_parts(vec![vec![z(), n()], vec![z(), n().scale(&rat(2, 1))]])
    }

    #[test]
    fn cancelling_character_is_exactly_one() {
        let g = sqrt2();
        let bx = FolnerBox::new(vec![1], vec![5000]);
        assert_eq!(weyl_average(&[2, -1], &line(), &g, &bx).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(weyl_average(&[0, 0], &line(), &g, &bx).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn geometric_series_bound() {
        let g = sqrt2();
        let alpha = std::f64::consts::SQRT_2;
        let denom = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, std::f64::consts::TAU * alpha)).norm();
        for big_n in [10i64, 100, 1000, 54321] {
            let bx = FolnerBox::new(vec![1], vec![big_n]);
            let v = weyl_average(&[1, 0], &line(), &g, &bx).unwrap();
            assert!(v.norm() <= 2.0 / (big_n as f64 * denom), "N={big_n}");
        }
    }

    #[test]
    fn empty_box() {
        let g = sqrt2();
        let bx = FolnerBox::new(vec![1], vec![0]);
        assert_eq!(weyl_average(&[1, 0], &line(), &g, &bx).unwrap_err(), TorusError::EmptyBox);
    }

    #[test]
    fn independent_of_thread_count() {
        let g = sqrt2();
        let u = PolynomialTorusSequence::from_parts(vec![vec![z(), n()], vec![z(), n().pow(2)]]);
        let bx = FolnerBox::centered(1, 60_000);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| weyl_average(&[1, 2], &u, &g, &bx).unwrap());
        let b = four.install(|| weyl_average(&[1, 2], &u, &g, &bx).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn report_on_line() {
        let g = sqrt2();
        let u = line();
        let closure = orbit_closure(&u).unwrap();
        let cfg = ReportConfig { c_max: 2, ladder: vec![1000, 10_000] };
        let rep = equidistribution_report(&u, &closure, &g, &cfg).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.failures().collect::<Vec<_>>());
        let exact = rep.rows.iter().find(|r| r.character == vec![2, -1]).unwrap();
        assert_eq!(exact.class, CharacterClass::Exact);
        assert!(exact.deviation <= 1e-12);
    }

    #[test]
    fn report_on_half_steps() {
        let g = Generators::default();
        let x = MultiPolyQ::constant(1, rat(1, 5));
        let u = PolynomialTorusSequence::from_parts(vec![vec![x.add(&n().scale(&rat(1, 2)))]]);
        let closure = orbit_closure(&u).unwrap();
        let cfg = ReportConfig { c_max: 2, ladder: vec![100, 1000] };
        let rep = equidistribution_report(&u, &closure, &g, &cfg).unwrap();
        assert!(rep.all_pass());
        let two = rep.rows.iter().find(|r| r.character == vec![2]).unwrap();
        assert_eq!(two.class, CharacterClass::Exact);
        let expect = std::f64::consts::TAU * 2.0 / 5.0;
        assert!((two.predicted_re - expect.cos()).abs() < 1e-15);
        assert!((two.measured_im - expect.sin()).abs() < 1e-12);
    }
}
