//! Scenario file schema.
//!
//! ```text
//! file      := [seed = u64] {"[[scenario]]" scenario}
//! scenario  := name = ident, task = kind, <task keys>
//! kind      := "certify" | "orbit" | "khintchine" | "popdiff" | "limit-check"
//! family    := family = preset-name | polys = [[coeff, ...], ...]   (lowest degree first)
//! coeff     := integer | "p/q" | [coordinate, ...]
//! interval  := ["a", "b"]   (rational endpoints, half-open, 0 <= a < b <= 1)
//! ```
//!
//! Task keys (`?` marks optional):
//!
//! * `certify`: field?, family, moduli? (list of coordinate lists),
//!   shift_samples?, seed?, expect? ("certified" | "refuted")
//! * `orbit`: field?, family, generator, c_max?, ladder?, expect_all_pass?,
//!   expect_full_torus?
//! * `khintchine`: field?, family, functional?, generator, set (intervals),
//!   epsilon, range ([start, end]), expect_nonempty?, expect_max_gap?
//! * `popdiff`: field?, family, grid, radius?, epsilon, seed?, export?,
//!   expect_popular_fraction_at_least?, expect_max_gap_at_most?
//! * `limit-check`: generator, r, s, p (integer coefficients), functions
//!   (three entries), ladder?, expect_gap_at_most?, expect_gap_non_increasing?
//!
//! A `grid` is a table with `kind` one of `random` (delta), `interval` (lo,
//! hi), `residues` (modulus, residues), `quadratic-residues`, `bits` (path)
//! or `rle` (path), plus `d` and `n` for the generated kinds. A function is
//! `{intervals = [...]}`, `{character = k}` or `{}` for the constant 1.

use serde::{Deserialize, Serialize};

use okdyn::intpoly::CoeffLiteral;

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub scenario: Vec<Scenario>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "task", rename_all = "kebab-case")]
pub enum Scenario {
    Certify(CertifySpec),
    Orbit(OrbitSpec),
    Khintchine(KhintchineSpec),
    Popdiff(PopdiffSpec),
    LimitCheck(LimitCheckSpec),
}

impl Scenario {
    pub fn name(&self) -> &str {
        match self {
            Scenario::Certify(s) => &s.name,
            Scenario::Orbit(s) => &s.name,
            Scenario::Khintchine(s) => &s.name,
            Scenario::Popdiff(s) => &s.name,
            Scenario::LimitCheck(s) => &s.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::Certify(_) => "certify",
            Scenario::Orbit(_) => "orbit",
            Scenario::Khintchine(_) => "khintchine",
            Scenario::Popdiff(_) => "popdiff",
            Scenario::LimitCheck(_) => "limit-check",
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    Certified,
    Refuted,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CertifySpec {
    pub name: String,
    pub field: Option<String>,
    pub family: Option<String>,
    pub polys: Option<Vec<Vec<CoeffLiteral>>>,
    pub moduli: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub shift_samples: usize,
    pub seed: Option<u64>,
    pub expect: Option<Expect>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSpec {
    pub name: String,
    pub field: Option<String>,
    pub family: Option<String>,
    pub polys: Option<Vec<Vec<CoeffLiteral>>>,
    pub generator: String,
    pub c_max: Option<i64>,
    pub ladder: Option<Vec<i64>>,
    pub expect_all_pass: Option<bool>,
    pub expect_full_torus: Option<bool>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct KhintchineSpec {
    pub name: String,
    pub field: Option<String>,
    pub family: Option<String>,
    pub polys: Option<Vec<Vec<CoeffLiteral>>>,
    pub functional: Option<Vec<i64>>,
    pub generator: String,
    pub set: Vec<[String; 2]>,
    pub epsilon: String,
    pub range: [i64; 2],
    pub expect_nonempty: Option<bool>,
    pub expect_max_gap: Option<u64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GridSpec {
    Random { d: usize, n: usize, delta: f64 },
    Interval { d: usize, n: usize, lo: usize, hi: usize },
    Residues { d: usize, n: usize, modulus: usize, residues: Vec<usize> },
    QuadraticResidues { d: usize, n: usize },
    Bits { path: String },
    Rle { path: String },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PopdiffSpec {
    pub name: String,
    pub field: Option<String>,
    pub family: Option<String>,
    pub polys: Option<Vec<Vec<CoeffLiteral>>>,
    pub grid: GridSpec,
    pub radius: Option<i64>,
    pub epsilon: String,
    pub seed: Option<u64>,
    pub export: Option<String>,
    pub expect_popular_fraction_at_least: Option<f64>,
    pub expect_max_gap_at_most: Option<u64>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub intervals: Option<Vec<[String; 2]>>,
    pub character: Option<i64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LimitCheckSpec {
    pub name: String,
    pub generator: String,
    pub r: i64,
    pub s: i64,
    pub p: Vec<i64>,
    pub functions: Vec<FunctionSpec>,
    pub ladder: Option<Vec<u64>>,
    pub expect_gap_at_most: Option<f64>,
    pub expect_gap_non_increasing: Option<bool>,
}

/// 1-based line of the `[[scenario]]` header of each entry, in order.
pub fn header_lines(text: &str) -> Vec<usize> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim_start();
            t.starts_with("[[scenario]]") || t.starts_with("[[ scenario ]]")
        })
        .map(|(i, _)| i + 1)
        .collect()
}

/// 1-based `(line, column)` of a byte offset.
pub fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}
