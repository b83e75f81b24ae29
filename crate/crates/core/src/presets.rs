//! Named fields, rotation generators and polynomial families.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::intpoly::{CoeffLiteral, CoordLiteral, IntPolyError, PolyOverK};
use crate::ring::{FieldSpecText, NumberField, RingError};
use crate::torus::Generator;

/// A family stored as coefficient literals (lowest degree first) over a
/// named field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub field: String,
    pub polys: Vec<Vec<CoeffLiteral>>,
    #[serde(default)]
    pub description: String,
}

impl FamilySpec {
    pub fn build(&self, field: &NumberField) -> Result<Vec<PolyOverK>, IntPolyError> {
        self.polys.iter().map(|p| PolyOverK::parse(field, p)).collect()
    }
}

/// `a + b√D` with rational `a`, `b` given as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(default = "zero_text")]
    pub rational: String,
    #[serde(default = "one_text")]
    pub irrational: String,
    pub radicand: i64,
}

fn zero_text() -> String {
    "0".into()
}

fn one_text() -> String {
    "1".into()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presets {
    fields: BTreeMap<String, FieldSpecText>,
    generators: BTreeMap<String, GeneratorSpec>,
    families: BTreeMap<String, FamilySpec>,
}

fn ints(cs: &[i64]) -> Vec<CoeffLiteral> {
    cs.iter().map(|&c| CoeffLiteral::Integer(c)).collect()
}

fn coords(cs: &[&[i64]]) -> Vec<CoeffLiteral> {
    cs.iter()
        .map(|c| CoeffLiteral::Coords(c.iter().map(|&v| CoordLiteral::Integer(v)).collect()))
        .collect()
}

fn family(field: &str, polys: Vec<Vec<CoeffLiteral>>, description: &str) -> FamilySpec {
    FamilySpec {
        field: field.into(),
        polys,
        description: description.into(),
    }
}

impl Default for Presets {
    fn default() -> Self {
        Self::builtin()
    }
}

impl Presets {
    pub fn builtin() -> Self {
        let field = |p: &[i64]| FieldSpecText {
            min_poly: p.to_vec(),
            assert_irreducible: false,
        };
        let fields = BTreeMap::from([
            ("rationals".to_string(), field(&[0, 1])),
            ("gaussian".to_string(), field(&[1, 0, 1])),
            ("sqrt2".to_string(), field(&[-2, 0, 1])),
            ("cubic".to_string(), field(&[-1, -1, 0, 1])),
        ]);
        let sqrt = |d: i64| GeneratorSpec {
            rational: zero_text(),
            irrational: one_text(),
            radicand: d,
        };
        let generators = BTreeMap::from([
            ("sqrt2".to_string(), sqrt(2)),
            ("sqrt3".to_string(), sqrt(3)),
            (
                "golden".to_string(),
                GeneratorSpec {
                    rational: "1/2".into(),
                    irrational: "1/2".into(),
                    radicand: 5,
                },
            ),
        ]);
        let sq = ints(&[0, 0, 1]);
        let families = BTreeMap::from([
            ("squares".to_string(), family("rationals", vec![sq.clone()], "{x^2}")),
            ("square-plus-one".to_string(), family("rationals", vec![ints(&[1, 0, 1])], "{x^2 + 1}")),
            (
                "square-and-shift".to_string(),
                family("rationals", vec![sq.clone(), ints(&[-1, 1])], "{x^2, x - 1}"),
            ),
            (
                "linear-quadratic".to_string(),
                family("rationals", vec![ints(&[0, 1]), sq.clone()], "{x, x^2}"),
            ),
            (
                "rp-sp-square".to_string(),
                family(
                    "rationals",
                    vec![sq.clone(), ints(&[0, 0, 2]), ints(&[0, 0, 3])],
                    "{rp, sp, (r+s)p} with p = x^2, r = 1, s = 2",
                ),
            ),
            (
                "independent-cubic".to_string(),
                family("rationals", vec![ints(&[0, 1]), sq.clone(), ints(&[0, 0, 0, 1])], "{x, x^2, x^3}"),
            ),
            ("gaussian-squares".to_string(), family("gaussian", vec![sq.clone()], "{x^2} over Z[i]")),
            (
                "gaussian-rp-sp".to_string(),
                family(
                    "gaussian",
                    vec![
                        coords(&[&[0, 0], &[0, 0], &[1, 0]]),
                        coords(&[&[0, 0], &[0, 0], &[1, 1]]),
                        coords(&[&[0, 0], &[0, 0], &[2, 1]]),
                    ],
                    "{rp, sp, (r+s)p} with p = x^2, r = 1, s = 1 + i",
                ),
            ),
            (
                "sqrt2-independent".to_string(),
                family("sqrt2", vec![ints(&[0, 1]), sq], "{x, x^2} over Z[sqrt 2]"),
            ),
            (
                "cubic-linear".to_string(),
                family("cubic", vec![coords(&[&[0, 0, 0], &[0, 1, 0]])], "{theta x} over Z[theta], theta^3 = theta + 1"),
            ),
        ]);
        Presets {
            fields,
            generators,
            families,
        }
    }

    pub fn add_field(&mut self, name: &str, spec: FieldSpecText) {
        self.fields.insert(name.into(), spec);
    }

    pub fn add_generator(&mut self, name: &str, spec: GeneratorSpec) {
        self.generators.insert(name.into(), spec);
    }

    pub fn add_family(&mut self, name: &str, spec: FamilySpec) {
        self.families.insert(name.into(), spec);
    }

    pub fn field_spec(&self, name: &str) -> Option<&FieldSpecText> {
        self.fields.get(name)
    }

    pub fn field(&self, name: &str) -> Option<Result<NumberField, RingError>> {
        self.fields.get(name).map(NumberField::from_spec)
    }

    pub fn generator(&self, name: &str) -> Option<Generator> {
        let g = self.generators.get(name)?;
        let a = crate::scalar::parse_rational(&g.rational)?;
        let b = crate::scalar::parse_rational(&g.irrational)?;
        Generator::quadratic(name, a, b, g.radicand)
    }

    pub fn family(&self, name: &str) -> Option<&FamilySpec> {
        self.families.get(name)
    }

    pub fn field_names(&self) -> impl Iterator<Item = &str> {
        self.fields.keys().map(String::as_str)
    }

    pub fn generator_names(&self) -> impl Iterator<Item = &str> {
        self.generators.keys().map(String::as_str)
    }

    pub fn family_names(&self) -> impl Iterator<Item = &str> {
        self.families.keys().map(String::as_str)
    }

    /// Human-readable listing, sorted by name within each section.
    pub fn listing(&self) -> String {
        let mut s = String::from("fields:\n");
        for (name, f) in &self.fields {
            let _ = writeln!(s, "  {name:<20} min_poly {:?}", f.min_poly);
        }
        s.push_str("generators:\n");
        for (name, g) in &self.generators {
            let _ = writeln!(s, "  {name:<20} {} + {}*sqrt({})", g.rational, g.irrational, g.radicand);
        }
        s.push_str("families:\n");
        for (name, f) in &self.families {
            let _ = writeln!(s, "  {name:<20} over {:<10} {}", f.field, f.description);
        }
        s
    }
}
