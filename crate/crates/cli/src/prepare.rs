//! Validation: resolves presets and checks preconditions, turning each
//! scenario into a ready-to-run [`Job`].

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use okdyn::circle::IntervalSet;
use okdyn::dynsim::{IntervalRotationSystem, LimitFunction};
use okdyn::intpoly::{coordinate_family, default_moduli, CoeffLiteral, PolyOverK};
use okdyn::popdiff::{self, GridSet};
use okdyn::presets::Presets;
use okdyn::scalar::parse_rational;
use okdyn::torus::{Generator, Generators, PolynomialTorusSequence, ReportConfig};
use okdyn::{AlgebraicInteger, MultiPolyQ, NumberField, QuadraticQ, Rational};

use crate::scenario::{Expect, FunctionSpec, GridSpec, Scenario, ScenarioFile};
use crate::CliError;

pub const DEFAULT_SEED: u64 = 0x5eed;

pub struct Job {
    pub name: String,
    pub kind: &'static str,
    pub line: usize,
    /// Scenario entry with every default filled in.
    pub params: Value,
    pub work: Work,
}

pub enum Work {
    Certify {
        field: NumberField,
        family: Vec<PolyOverK>,
        moduli: Vec<AlgebraicInteger>,
        shift_samples: usize,
        seed: u64,
        expect: Option<Expect>,
    },
    Orbit {
        sequence: PolynomialTorusSequence,
        generators: Generators,
        config: ReportConfig,
        expect_all_pass: Option<bool>,
        expect_full_torus: Option<bool>,
    },
    Khintchine {
        system: IntervalRotationSystem<QuadraticQ>,
        field: NumberField,
        family: Vec<PolyOverK>,
        functional: Vec<i64>,
        range: (i64, i64),
        epsilon: Rational,
        expect_nonempty: Option<bool>,
        expect_max_gap: Option<u64>,
    },
    Popdiff {
        set: GridSet,
        field: NumberField,
        family: Vec<PolyOverK>,
        radius: Option<i64>,
        epsilon: Rational,
        export: Option<String>,
        expect_popular_fraction_at_least: Option<f64>,
        expect_max_gap_at_most: Option<u64>,
    },
    LimitCheck {
        alpha: QuadraticQ,
        r: i64,
        s: i64,
        p: Vec<i64>,
        functions: [LimitFunction; 3],
        ladder: Vec<u64>,
        expect_gap_at_most: Option<f64>,
        expect_gap_non_increasing: Option<bool>,
    },
}

struct Ctx<'a> {
    name: &'a str,
    line: usize,
}

impl Ctx<'_> {
    fn err(&self, key: &str, message: impl ToString) -> CliError {
        CliError::Validation {
            scenario: self.name.into(),
            line: self.line,
            key: key.into(),
            message: message.to_string(),
        }
    }

    fn rational(&self, key: &str, s: &str) -> Result<Rational, CliError> {
        parse_rational(s).ok_or_else(|| self.err(key, format!("not a rational number: {s:?}")))
    }

    fn positive(&self, key: &str, s: &str) -> Result<Rational, CliError> {
        let q = self.rational(key, s)?;
        if q <= Rational::from_integer(0.into()) {
            return Err(self.err(key, "must be positive"));
        }
        Ok(q)
    }

    fn field(&self, presets: &Presets, name: &str) -> Result<NumberField, CliError> {
        match presets.field(name) {
            None => Err(self.err("field", format!("unknown field preset {name:?}"))),
            Some(Err(e)) => Err(self.err("field", e)),
            Some(Ok(f)) => Ok(f),
        }
    }

    fn generator(&self, presets: &Presets, name: &str) -> Result<Generator, CliError> {
        presets
            .generator(name)
            .ok_or_else(|| self.err("generator", format!("unknown generator preset {name:?}")))
    }

    fn intervals(&self, key: &str, iv: &[[String; 2]]) -> Result<IntervalSet<Rational>, CliError> {
        let pairs = iv
            .iter()
            .map(|[a, b]| Ok((self.rational(key, a)?, self.rational(key, b)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        IntervalSet::from_rationals(&pairs).map_err(|e| self.err(key, e))
    }

    /// `(field name, field, family)` from either a family preset or inline
    /// polynomials.
    fn family(
        &self,
        presets: &Presets,
        field: &Option<String>,
        family: &Option<String>,
        polys: &Option<Vec<Vec<CoeffLiteral>>>,
    ) -> Result<(String, NumberField, Vec<PolyOverK>), CliError> {
        let (field_name, literals, key) = match (family, polys) {
            (Some(_), Some(_)) => return Err(self.err("polys", "give either family or polys, not both")),
            (None, None) => return Err(self.err("family", "missing family or polys")),
            (Some(name), None) => {
                let spec = presets
                    .family(name)
                    .ok_or_else(|| self.err("family", format!("unknown family preset {name:?}")))?;
                if let Some(f) = field {
                    if *f != spec.field {
                        return Err(self.err(
                            "field",
                            format!("family {name:?} is defined over {:?}, not {f:?}", spec.field),
                        ));
                    }
                }
                (spec.field.clone(), spec.polys.clone(), "family")
            }
            (None, Some(p)) => (field.clone().unwrap_or_else(|| "rationals".into()), p.clone(), "polys"),
        };
        let k = self.field(presets, &field_name)?;
        if literals.is_empty() {
            return Err(self.err(key, "empty family"));
        }
        let polys = literals
            .iter()
            .map(|p| PolyOverK::parse(&k, p).map_err(|e| self.err(key, e)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((field_name, k, polys))
    }
}

fn render_family(family: &[PolyOverK]) -> Value {
    family
        .iter()
        .map(|p| p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>())
        .collect()
}

fn with_resolved(spec: &impl Serialize, kind: &str, extra: Value) -> Value {
    let mut v = serde_json::to_value(spec).expect("scenario specs serialize");
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.insert("task".into(), Value::String(kind.into()));
        m.retain(|_, x| !x.is_null());
        m.extend(e);
    }
    v
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

pub fn prepare(
    file: &ScenarioFile,
    text: &str,
    presets: &Presets,
    base_dir: &Path,
    cli_seed: Option<u64>,
) -> Result<Vec<Job>, CliError> {
    let lines = crate::scenario::header_lines(text);
    let mut seen = std::collections::BTreeSet::new();
    let mut jobs = Vec::new();
    for (i, sc) in file.scenario.iter().enumerate() {
        let ctx = Ctx {
            name: sc.name(),
            line: lines.get(i).copied().unwrap_or(0),
        };
        if !valid_name(sc.name()) {
            return Err(ctx.err("name", "use letters, digits, '-' and '_' only"));
        }
        if !seen.insert(sc.name().to_string()) {
            return Err(ctx.err("name", "duplicate scenario name"));
        }
        let default_seed = cli_seed.or(file.seed).unwrap_or(DEFAULT_SEED);
        let (params, work) = prepare_one(sc, &ctx, presets, base_dir, default_seed)?;
        jobs.push(Job {
            name: sc.name().into(),
            kind: sc.kind(),
            line: ctx.line,
            params,
            work,
        });
    }
    Ok(jobs)
}

fn prepare_one(
    sc: &Scenario,
    ctx: &Ctx,
    presets: &Presets,
    base_dir: &Path,
    default_seed: u64,
) -> Result<(Value, Work), CliError> {
    match sc {
        Scenario::Certify(s) => {
            let (field_name, k, family) = ctx.family(presets, &s.field, &s.family, &s.polys)?;
            let moduli = match &s.moduli {
                None => default_moduli(&k),
                Some(ms) => {
                    if ms.is_empty() {
                        return Err(ctx.err("moduli", "empty moduli list"));
                    }
                    ms.iter()
                        .map(|m| {
                            let r = k.integer_i64(m).map_err(|e| ctx.err("moduli", e))?;
                            if r.is_zero() {
                                return Err(ctx.err("moduli", "modulus 0"));
                            }
                            Ok(r)
                        })
                        .collect::<Result<Vec<_>, _>>()?
                }
            };
            let seed = s.seed.unwrap_or(default_seed);
            let params = with_resolved(
                s,
                sc.kind(),
                json!({
                    "field": field_name,
                    "min_poly": k.to_spec().min_poly,
                    "polys": render_family(&family),
                    "moduli": moduli.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                    "seed": seed,
                }),
            );
            Ok((
                params,
                Work::Certify {
                    field: k,
                    family,
                    moduli,
                    shift_samples: s.shift_samples,
                    seed,
                    expect: s.expect.clone(),
                },
            ))
        }
        Scenario::Orbit(s) => {
            let (field_name, k, family) = ctx.family(presets, &s.field, &s.family, &s.polys)?;
            let gen = ctx.generator(presets, &s.generator)?;
            let c_max = s.c_max.unwrap_or(3);
            if c_max < 1 {
                return Err(ctx.err("c_max", "must be at least 1"));
            }
            let ladder = s.ladder.clone().unwrap_or_else(|| ReportConfig::default().ladder);
            if ladder.is_empty() || ladder.iter().any(|&n| n < 1) || ladder.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ctx.err("ladder", "must be a nonempty increasing list of positive integers"));
            }
            let coords = coordinate_family(&family, &k).map_err(|e| ctx.err("polys", e))?;
            let d = k.degree();
            let sequence =
                PolynomialTorusSequence::from_parts(coords.into_iter().map(|p| vec![MultiPolyQ::zero(d), p]).collect());
            let params = with_resolved(
                s,
                sc.kind(),
                json!({
                    "field": field_name,
                    "min_poly": k.to_spec().min_poly,
                    "polys": render_family(&family),
                    "generator_value": gen.value.to_string(),
                    "c_max": c_max,
                    "ladder": ladder,
                }),
            );
            Ok((
                params,
                Work::Orbit {
                    sequence,
                    generators: Generators::new(vec![gen]),
                    config: ReportConfig { c_max, ladder },
                    expect_all_pass: s.expect_all_pass,
                    expect_full_torus: s.expect_full_torus,
                },
            ))
        }
        Scenario::Khintchine(s) => {
            let (field_name, k, family) = ctx.family(presets, &s.field, &s.family, &s.polys)?;
            let gen = ctx.generator(presets, &s.generator)?;
            let set = ctx.intervals("set", &s.set)?;
            let epsilon = ctx.positive("epsilon", &s.epsilon)?;
            let [start, end] = s.range;
            if start > end {
                return Err(ctx.err("range", "start exceeds end"));
            }
            let functional = s.functional.clone().unwrap_or_else(|| {
                let mut f = vec![0; k.degree()];
                f[0] = 1;
                f
            });
            if functional.len() != k.degree() {
                return Err(ctx.err(
                    "functional",
                    format!("needs {} weights for this field", k.degree()),
                ));
            }
            let params = with_resolved(
                s,
                sc.kind(),
                json!({
                    "field": field_name,
                    "min_poly": k.to_spec().min_poly,
                    "polys": render_family(&family),
                    "functional": functional,
                    "generator_value": gen.value.to_string(),
                    "k": family.len(),
                    "delta": set.measure().to_string(),
                }),
            );
            Ok((
                params,
                Work::Khintchine {
                    system: IntervalRotationSystem::new(gen.value, set),
                    field: k,
                    family,
                    functional,
                    range: (start, end),
                    epsilon,
                    expect_nonempty: s.expect_nonempty,
                    expect_max_gap: s.expect_max_gap,
                },
            ))
        }
        Scenario::Popdiff(s) => {
            let (field_name, k, family) = ctx.family(presets, &s.field, &s.family, &s.polys)?;
            let epsilon = ctx.positive("epsilon", &s.epsilon)?;
            if let Some(r) = s.radius {
                if r < 1 {
                    return Err(ctx.err("radius", "must be at least 1"));
                }
            }
            let seed = s.seed.unwrap_or(default_seed);
            let set = build_grid(&s.grid, seed, base_dir).map_err(|e| ctx.err("grid", e))?;
            if set.dim() != k.degree() {
                return Err(ctx.err(
                    "grid",
                    format!("grid dimension {} differs from field degree {}", set.dim(), k.degree()),
                ));
            }
            if let Some(path) = &s.export {
                if !(path.ends_with(".bits") || path.ends_with(".rle")) || path.contains(['/', '\\']) {
                    return Err(ctx.err("export", "a plain file name ending in .bits or .rle"));
                }
            }
            let params = with_resolved(
                s,
                sc.kind(),
                json!({
                    "field": field_name,
                    "min_poly": k.to_spec().min_poly,
                    "polys": render_family(&family),
                    "seed": seed,
                    "grid_dim": set.dim(),
                    "grid_side": set.side(),
                    "grid_popcount": set.popcount(),
                }),
            );
            Ok((
                params,
                Work::Popdiff {
                    set,
                    field: k,
                    family,
                    radius: s.radius,
                    epsilon,
                    export: s.export.clone(),
                    expect_popular_fraction_at_least: s.expect_popular_fraction_at_least,
                    expect_max_gap_at_most: s.expect_max_gap_at_most,
                },
            ))
        }
        Scenario::LimitCheck(s) => {
            let gen = ctx.generator(presets, &s.generator)?;
            if s.r == 0 || s.s == 0 || s.r == s.s {
                return Err(ctx.err("r", "r and s must be distinct and nonzero"));
            }
            if s.p.iter().all(|&c| c == 0) {
                return Err(ctx.err("p", "zero polynomial"));
            }
            if s.functions.len() != 3 {
                return Err(ctx.err("functions", "exactly three functions are required"));
            }
            let fs: Vec<LimitFunction> =
                s.functions.iter().map(|f| limit_function(ctx, f)).collect::<Result<_, _>>()?;
            let ladder = s.ladder.clone().unwrap_or_else(|| vec![1_000, 10_000, 100_000]);
            if ladder.is_empty() || ladder.iter().any(|&n| n < 1) || ladder.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ctx.err("ladder", "must be a nonempty increasing list of positive integers"));
            }
            let params = with_resolved(
                s,
                sc.kind(),
                json!({ "generator_value": gen.value.to_string(), "ladder": ladder }),
            );
            let functions: [LimitFunction; 3] = fs.try_into().map_err(|_| ctx.err("functions", "three entries"))?;
            Ok((
                params,
                Work::LimitCheck {
                    alpha: gen.value,
                    r: s.r,
                    s: s.s,
                    p: s.p.clone(),
                    functions,
                    ladder,
                    expect_gap_at_most: s.expect_gap_at_most,
                    expect_gap_non_increasing: s.expect_gap_non_increasing,
                },
            ))
        }
    }
}

fn limit_function(ctx: &Ctx, f: &FunctionSpec) -> Result<LimitFunction, CliError> {
    match (&f.intervals, f.character) {
        (Some(_), Some(_)) => Err(ctx.err("functions", "give intervals or character, not both")),
        (Some(iv), None) => Ok(LimitFunction::indicator(&ctx.intervals("functions", iv)?)),
        (None, Some(k)) => Ok(LimitFunction::Character(k)),
        (None, None) => Ok(LimitFunction::one()),
    }
}

fn build_grid(spec: &GridSpec, seed: u64, base_dir: &Path) -> Result<GridSet, String> {
    let open = |path: &str| {
        let p = base_dir.join(path);
        std::fs::File::open(&p)
            .map(std::io::BufReader::new)
            .map_err(|e| format!("{}: {e}", p.display()))
    };
    let grid = match spec {
        GridSpec::Random { d, n, delta } => {
            if !(0.0..=1.0).contains(delta) {
                return Err("delta must lie in [0, 1]".into());
            }
            popdiff::random(*d, *n, *delta, seed)
        }
        GridSpec::Interval { d, n, lo, hi } => popdiff::interval(*d, *n, *lo, *hi),
        GridSpec::Residues { d, n, modulus, residues } => popdiff::residue_classes(*d, *n, *modulus, residues),
        GridSpec::QuadraticResidues { d, n } => popdiff::quadratic_residues(*d, *n),
        GridSpec::Bits { path } => popdiff::read_bits(open(path)?),
        GridSpec::Rle { path } => popdiff::read_rle(open(path)?),
    };
    grid.map_err(|e| e.to_string())
}
