//! JSON forms of every machine-readable input the crate consumes, the
//! matching serializers, text parsing for stratum classes, and the registry
//! of built-in example data files.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cone::{ConeSpec, Decomposition};
use crate::exact::LaurentPoly;
use crate::integral::{ConeIntegralData, ResolutionData, Stratum, StratumClass};
use crate::lie::LieAlgebraZ;
use crate::{Error, Result};

fn schema(err: impl std::fmt::Display) -> Error {
    Error::Schema(err.to_string())
}

// ---- stratum class text form ----

/// Parse a stratum class: `[Name]` is a named symbolic class, anything else
/// is a product of Laurent polynomial factors, each either parenthesized
/// (with an optional `^k`) or a plain sum of monomials, joined by `*`.
/// Accepts everything the `Display` impls produce, e.g. `(L - 1)^2 * (L + 1)`.
pub fn parse_class(s: &str) -> Result<StratumClass> {
    let t = s.trim();
    if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::Schema(format!("empty symbolic class name in {s:?}")));
        }
        return Ok(StratumClass::Symbol(name.to_string()));
    }
    Ok(StratumClass::Poly(parse_laurent_product(t)?))
}

/// Parse a product of Laurent polynomial factors.
pub fn parse_laurent_product(s: &str) -> Result<LaurentPoly> {
    let mut factors = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Schema(format!("unbalanced ')' in {s:?}")))?;
            }
            '*' if depth == 0 => {
                // only a '*' adjacent to a parenthesized group separates
                // factors; otherwise it is coefficient notation like "2*L"
                let prev = s[..i].trim_end().as_bytes().last().copied();
                let next = s[i + 1..].trim_start().as_bytes().first().copied();
                if prev == Some(b')') || next == Some(b'(') {
                    factors.push(&s[start..i]);
                    start = i + 1;
                }
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Schema(format!("unbalanced '(' in {s:?}")));
    }
    factors.push(&s[start..]);

    let mut out = LaurentPoly::one();
    for piece in factors {
        let piece = piece.trim();
        let factor = if let Some(rest) = piece.strip_prefix('(') {
            let close = rest
                .rfind(')')
                .ok_or_else(|| Error::Schema(format!("unbalanced '(' in {piece:?}")))?;
            let inner = parse_laurent_product(&rest[..close])?;
            let tail = rest[close + 1..].trim();
            if tail.is_empty() {
                inner
            } else if let Some(exp) = tail.strip_prefix('^') {
                let k: u32 = exp.trim().parse().map_err(|_| {
                    Error::Schema(format!("bad factor power {tail:?} in {piece:?}"))
                })?;
                inner.pow(k)
            } else {
                return Err(Error::Schema(format!(
                    "unexpected trailing {tail:?} after ')' in {piece:?}"
                )));
            }
        } else {
            LaurentPoly::from_str(piece).map_err(schema)?
        };
        out = &out * &factor;
    }
    Ok(out)
}

// ---- polyhedral cone ----

#[derive(Serialize, Deserialize)]
struct ConeSpecJson {
    t: usize,
    inequalities: Vec<IneqJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    notes: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct IneqJson {
    f: Vec<i64>,
    g: Vec<i64>,
}

/// Load a cone description: each inequality is a monomial valuation
/// condition `v(x^f) <= v(x^g)`, stored as the row `g - f`.
pub fn cone_spec_from_json(text: &str) -> Result<ConeSpec> {
    let raw: ConeSpecJson = serde_json::from_str(text).map_err(schema)?;
    let mut rows = Vec::with_capacity(raw.inequalities.len());
    for (i, ineq) in raw.inequalities.iter().enumerate() {
        if ineq.f.len() != raw.t || ineq.g.len() != raw.t {
            return Err(Error::Schema(format!(
                "inequality {} does not have {} entries on both sides",
                i + 1,
                raw.t
            )));
        }
        if ineq.f.iter().chain(&ineq.g).any(|&e| e < 0) {
            return Err(Error::Schema(format!(
                "inequality {} has negative exponents",
                i + 1
            )));
        }
        rows.push(ineq.f.iter().zip(&ineq.g).map(|(&f, &g)| g - f).collect());
    }
    ConeSpec::new(raw.t, rows)
}

pub fn cone_spec_to_json(spec: &ConeSpec) -> String {
    let inequalities = spec
        .inequalities()
        .iter()
        .map(|row| IneqJson {
            f: row.iter().map(|&a| (-a).max(0)).collect(),
            g: row.iter().map(|&a| a.max(0)).collect(),
        })
        .collect();
    let raw = ConeSpecJson {
        t: spec.dim(),
        inequalities,
        notes: None,
    };
    serde_json::to_string_pretty(&raw).expect("cone spec serializes")
}

/// JSON dump of a decomposition: the pieces with their generator vectors.
pub fn decomposition_to_json(d: &Decomposition) -> String {
    #[derive(Serialize)]
    struct PieceJson {
        generators: Vec<Vec<i64>>,
    }
    #[derive(Serialize)]
    struct DecompositionJson {
        ambient_dim: usize,
        pieces: Vec<PieceJson>,
    }
    let raw = DecompositionJson {
        ambient_dim: d.ambient_dim(),
        pieces: d
            .pieces()
            .iter()
            .map(|p| PieceJson {
                generators: p.generators().to_vec(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("decomposition serializes")
}

// ---- cone integral data ----

#[derive(Serialize, Deserialize)]
struct ConeDataJson {
    variables: Vec<String>,
    f0: BTreeMap<String, u32>,
    g0: BTreeMap<String, u32>,
    conditions: Vec<FgMapJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    symbolic: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    notes: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct FgMapJson {
    f: BTreeMap<String, u32>,
    g: BTreeMap<String, u32>,
}

fn exponents(map: &BTreeMap<String, u32>, variables: &[String], what: &str) -> Result<Vec<u32>> {
    let mut out = vec![0u32; variables.len()];
    for (name, &e) in map {
        let idx = variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Schema(format!("{what} mentions unknown variable {name:?}")))?;
        out[idx] = e;
    }
    Ok(out)
}

fn exponent_map(exps: &[u32], variables: &[String]) -> BTreeMap<String, u32> {
    variables
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| (v.clone(), e))
        .collect()
}

pub fn cone_data_from_json(text: &str) -> Result<ConeIntegralData> {
    let raw: ConeDataJson = serde_json::from_str(text).map_err(schema)?;
    let f0 = exponents(&raw.f0, &raw.variables, "f0")?;
    let g0 = exponents(&raw.g0, &raw.variables, "g0")?;
    let mut conditions = Vec::with_capacity(raw.conditions.len());
    for (i, c) in raw.conditions.iter().enumerate() {
        let label = format!("condition {}", i + 1);
        conditions.push((
            exponents(&c.f, &raw.variables, &label)?,
            exponents(&c.g, &raw.variables, &label)?,
        ));
    }
    Ok(ConeIntegralData::new(raw.variables, f0, g0, conditions)?
        .with_symbolic_conditions(raw.symbolic))
}

pub fn cone_data_to_json(data: &ConeIntegralData) -> String {
    let vars = data.variables();
    let raw = ConeDataJson {
        variables: vars.to_vec(),
        f0: exponent_map(data.f0(), vars),
        g0: exponent_map(data.g0(), vars),
        conditions: data
            .conditions()
            .iter()
            .map(|(f, g)| FgMapJson {
                f: exponent_map(f, vars),
                g: exponent_map(g, vars),
            })
            .collect(),
        symbolic: data.symbolic_conditions().to_vec(),
        notes: None,
    };
    serde_json::to_string_pretty(&raw).expect("cone data serializes")
}

// ---- resolution data ----

#[derive(Serialize, Deserialize)]
struct ResolutionJson {
    ambient_dim: usize,
    nf: Vec<Vec<u32>>,
    ng: Vec<Vec<u32>>,
    nu: Vec<u32>,
    strata: BTreeMap<String, StratumJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    notes: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct StratumJson {
    class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    euler: Option<i64>,
}

/// Parse a stratum key: comma-separated 1-based divisor indices, sorted;
/// the empty string is the empty set.
fn parse_subset_key(key: &str) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    if key.is_empty() {
        return Ok(out);
    }
    for part in key.split(',') {
        let j: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::Schema(format!("bad stratum key {key:?}")))?;
        if j == 0 {
            return Err(Error::Schema(format!(
                "stratum key {key:?} uses 0; divisor indices are 1-based"
            )));
        }
        if !out.insert(j - 1) {
            return Err(Error::Schema(format!(
                "stratum key {key:?} repeats an index"
            )));
        }
    }
    Ok(out)
}

/// Render a 0-based divisor subset as a JSON stratum key: 1-based indices
/// joined by commas, empty string for the whole-torus stratum.
fn subset_key(set: &BTreeSet<usize>) -> String {
    set.iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn resolution_from_json(text: &str) -> Result<ResolutionData> {
    let raw: ResolutionJson = serde_json::from_str(text).map_err(schema)?;
    let mut strata = BTreeMap::new();
    for (key, s) in &raw.strata {
        let set = parse_subset_key(key)?;
        let class = parse_class(&s.class)?;
        strata.insert(set, Stratum::new(class, s.euler)?);
    }
    ResolutionData::new(raw.ambient_dim, raw.nf, raw.ng, raw.nu, strata)
}

pub fn resolution_to_json(r: &ResolutionData) -> String {
    let strata = r
        .strata()
        .iter()
        .map(|(set, s)| {
            let euler = match s.class() {
                StratumClass::Symbol(_) => s.euler().and_then(|e| {
                    use num::ToPrimitive;
                    e.to_integer().to_i64()
                }),
                StratumClass::Poly(_) => None,
            };
            (
                subset_key(set),
                StratumJson {
                    class: s.class().to_string(),
                    euler,
                },
            )
        })
        .collect();
    let raw = ResolutionJson {
        ambient_dim: r.ambient_dim(),
        nf: r.nf().to_vec(),
        ng: r.ng().to_vec(),
        nu: r.nu().to_vec(),
        strata,
        notes: None,
    };
    serde_json::to_string_pretty(&raw).expect("resolution data serializes")
}

// ---- Lie algebras ----

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    dim: usize,
    brackets: BTreeMap<String, BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    notes: Option<String>,
}

pub fn algebra_from_json(text: &str) -> Result<LieAlgebraZ> {
    let raw: AlgebraJson = serde_json::from_str(text).map_err(schema)?;
    let mut brackets = BTreeMap::new();
    for (key, entry) in &raw.brackets {
        let (i, j) = key
            .split_once(',')
            .ok_or_else(|| Error::Schema(format!("bracket key {key:?} is not \"i,j\"")))?;
        let i: usize = i
            .trim()
            .parse()
            .map_err(|_| Error::Schema(format!("bad bracket key {key:?}")))?;
        let j: usize = j
            .trim()
            .parse()
            .map_err(|_| Error::Schema(format!("bad bracket key {key:?}")))?;
        let mut targets = BTreeMap::new();
        for (k, &c) in entry {
            let k: usize = k
                .trim()
                .parse()
                .map_err(|_| Error::Schema(format!("bad basis index {k:?} under {key:?}")))?;
            if c != 0 {
                targets.insert(k, c);
            }
        }
        if !targets.is_empty() {
            brackets.insert((i, j), targets);
        }
    }
    LieAlgebraZ::new(raw.dim, brackets)
}

pub fn algebra_to_json(a: &LieAlgebraZ) -> String {
    let brackets = a
        .brackets()
        .iter()
        .map(|(&(i, j), entry)| {
            (
                format!("{i},{j}"),
                entry.iter().map(|(&k, &c)| (k.to_string(), c)).collect(),
            )
        })
        .collect();
    let raw = AlgebraJson {
        dim: a.dim(),
        brackets,
        notes: None,
    };
    serde_json::to_string_pretty(&raw).expect("algebra serializes")
}

// ---- input sniffing ----

/// Any of the machine-readable inputs, recognized by its distinguishing
/// top-level field.
pub enum AnyInput {
    Algebra(LieAlgebraZ),
    ConeData(ConeIntegralData),
    Resolution(ResolutionData),
    Cone(ConeSpec),
}

/// Identify and parse an input document: `brackets` marks a Lie algebra,
/// `strata` resolution data, `variables` cone integral data, and
/// `inequalities` a cone description.
pub fn sniff_input(text: &str) -> Result<AnyInput> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(schema)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Schema("top-level JSON value is not an object".into()))?;
    if obj.contains_key("brackets") {
        Ok(AnyInput::Algebra(algebra_from_json(text)?))
    } else if obj.contains_key("strata") {
        Ok(AnyInput::Resolution(resolution_from_json(text)?))
    } else if obj.contains_key("variables") {
        Ok(AnyInput::ConeData(cone_data_from_json(text)?))
    } else if obj.contains_key("inequalities") {
        Ok(AnyInput::Cone(cone_spec_from_json(text)?))
    } else {
        Err(Error::Schema(
            "unrecognized input: expected one of the fields \
             \"brackets\", \"strata\", \"variables\", \"inequalities\""
                .into(),
        ))
    }
}

// ---- built-in examples ----

/// One built-in data file: its registry name and raw JSON text.
pub struct BuiltinFile {
    pub name: &'static str,
    pub json: &'static str,
}

/// Built-in Lie algebra files, in registry order.
pub const ALGEBRA_FILES: &[BuiltinFile] = &[
    BuiltinFile {
        name: "abelian_1",
        json: include_str!("../data/abelian_1.json"),
    },
    BuiltinFile {
        name: "abelian_2",
        json: include_str!("../data/abelian_2.json"),
    },
    BuiltinFile {
        name: "abelian_3",
        json: include_str!("../data/abelian_3.json"),
    },
    BuiltinFile {
        name: "heisenberg",
        json: include_str!("../data/heisenberg.json"),
    },
    BuiltinFile {
        name: "sl2",
        json: include_str!("../data/sl2.json"),
    },
    BuiltinFile {
        name: "dim9_elliptic",
        json: include_str!("../data/dim9_elliptic.json"),
    },
];

/// Curated cone integral data for the worked examples.
pub const CONE_DATA_FILES: &[BuiltinFile] = &[
    BuiltinFile {
        name: "abelian_3",
        json: include_str!("../data/abelian_cone_3.json"),
    },
    BuiltinFile {
        name: "heisenberg",
        json: include_str!("../data/heisenberg_cone.json"),
    },
    BuiltinFile {
        name: "sl2",
        json: include_str!("../data/sl2_cone.json"),
    },
];

/// Curated resolution data (currently only sl2 needs one).
pub const RESOLUTION_FILES: &[BuiltinFile] = &[BuiltinFile {
    name: "sl2",
    json: include_str!("../data/sl2_resolution.json"),
}];

pub fn example_names() -> Vec<&'static str> {
    ALGEBRA_FILES.iter().map(|f| f.name).collect()
}

fn unknown(name: &str) -> Error {
    Error::UnknownExample(name.to_string(), example_names().join(", "))
}

/// The built-in Lie algebra with the given registry name.
pub fn builtin_algebra(name: &str) -> Result<LieAlgebraZ> {
    let file = ALGEBRA_FILES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| unknown(name))?;
    algebra_from_json(file.json)
}

/// Curated cone integral data for the example, when there is one.
pub fn builtin_cone_data(name: &str) -> Result<Option<ConeIntegralData>> {
    if !ALGEBRA_FILES.iter().any(|f| f.name == name) {
        return Err(unknown(name));
    }
    CONE_DATA_FILES
        .iter()
        .find(|f| f.name == name)
        .map(|f| cone_data_from_json(f.json))
        .transpose()
}

/// Curated resolution data for the example, when there is one.
pub fn builtin_resolution(name: &str) -> Result<Option<ResolutionData>> {
    if !ALGEBRA_FILES.iter().any(|f| f.name == name) {
        return Err(unknown(name));
    }
    RESOLUTION_FILES
        .iter()
        .find(|f| f.name == name)
        .map(|f| resolution_from_json(f.json))
        .transpose()
}
