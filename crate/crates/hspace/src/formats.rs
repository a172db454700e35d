//! Canonical JSON forms of families, vectors and results.
//!
//! Objects serialize with sorted keys and rationals as `"num/den"` strings,
//! so equal inputs always give identical bytes.

use std::collections::BTreeMap;
use std::fmt;

use hspace_core::dual::{Decomposition, Sign, SignedIndicator};
use hspace_core::num::{format_rational, parse_rational};
use hspace_core::{FamilyRep, FiniteSet, Rational, SparseVector};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

impl From<hspace_core::Error> for FormatError {
    fn from(e: hspace_core::Error) -> Self {
        FormatError(e.to_string())
    }
}

pub type FormatResult<T> = Result<T, FormatError>;

fn bad(msg: impl Into<String>) -> FormatError {
    FormatError(msg.into())
}

/// Resolves `schreier:1`, `singletons`, `all_subsets`, `evens_odds`,
/// `dyadic` and `dyadic:4`.
pub fn builtin_family(name: &str) -> FormatResult<FamilyRep> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let number = |a: &str| a.parse::<u32>().map_err(|_| bad(format!("bad family parameter `{a}`")));
    let rep = match (head, arg) {
        ("singletons", None) => FamilyRep::Singletons,
        ("all_subsets", None) => FamilyRep::AllSubsets,
        ("evens_odds", None) => FamilyRep::EvensOdds,
        ("schreier", Some(a)) => FamilyRep::schreier(number(a)?)?,
        ("schreier", None) => FamilyRep::schreier(1)?,
        ("dyadic", None) => FamilyRep::dyadic(None)?,
        ("dyadic", Some(a)) => FamilyRep::dyadic(Some(number(a)?))?,
        _ => return Err(bad(format!("unknown family `{name}`"))),
    };
    Ok(rep)
}

pub fn family_from_json(value: &Value) -> FormatResult<FamilyRep> {
    let obj = value.as_object().ok_or_else(|| bad("family description must be an object"))?;
    let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| bad("family description needs a `kind`"))?;
    let uint = |key: &str| -> FormatResult<Option<u32>> {
        match obj.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => v
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .map(Some)
                .ok_or_else(|| bad(format!("`{key}` must be a non-negative integer"))),
        }
    };
    let sets = |key: &str| -> FormatResult<Vec<FiniteSet>> {
        obj.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| bad(format!("`{key}` must be an array of sets")))?
            .iter()
            .map(set_from_json)
            .collect()
    };
    let rep = match kind {
        "explicit" => {
            let complete = obj.get("complete").and_then(Value::as_bool).unwrap_or(false);
            FamilyRep::explicit(sets("sets")?, complete)?
        }
        "schreier" => FamilyRep::schreier(uint("order")?.unwrap_or(1))?,
        "singletons" => FamilyRep::Singletons,
        "all_subsets" => FamilyRep::AllSubsets,
        "evens_odds" => FamilyRep::EvensOdds,
        "dyadic_branches" => FamilyRep::dyadic(uint("depth")?)?,
        "spread_hereditary_closure" => FamilyRep::spread_closure(sets("generators")?),
        other => return Err(bad(format!("unknown family kind `{other}`"))),
    };
    Ok(rep)
}

pub fn family_to_json(rep: &FamilyRep) -> Value {
    match rep {
        FamilyRep::Explicit(e) => json!({
            "kind": "explicit",
            "sets": e.declared().iter().map(set_to_json).collect::<Vec<_>>(),
            "complete": e.is_complete(),
        }),
        FamilyRep::Singletons => json!({"kind": "singletons"}),
        FamilyRep::AllSubsets => json!({"kind": "all_subsets"}),
        FamilyRep::Schreier { order } => json!({"kind": "schreier", "order": order}),
        FamilyRep::EvensOdds => json!({"kind": "evens_odds"}),
        FamilyRep::DyadicBranches { depth } => match depth {
            Some(d) => json!({"kind": "dyadic_branches", "depth": d}),
            None => json!({"kind": "dyadic_branches"}),
        },
        FamilyRep::SpreadHereditaryClosure { generators } => json!({
            "kind": "spread_hereditary_closure",
            "generators": generators.iter().map(set_to_json).collect::<Vec<_>>(),
        }),
    }
}

pub fn set_from_json(value: &Value) -> FormatResult<FiniteSet> {
    let items = value.as_array().ok_or_else(|| bad("a set must be an array of positive integers"))?;
    let elements = items
        .iter()
        .map(|v| v.as_u64().filter(|&n| n > 0).map(|n| n as usize))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| bad("set elements must be positive integers"))?;
    Ok(FiniteSet::new(elements)?)
}

pub fn set_to_json(set: &FiniteSet) -> Value {
    Value::from(set.elements().to_vec())
}

pub fn rational_from_json(value: &Value) -> FormatResult<Rational> {
    match value {
        Value::String(s) => Ok(parse_rational(s)?),
        Value::Number(n) => Ok(parse_rational(&n.to_string())?),
        _ => Err(bad(format!("expected a rational, found {value}"))),
    }
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// Accepts `{"1":"1","3":"-1/2"}` or a dense array starting at index 1.
pub fn vector_from_json<S>(value: &Value) -> FormatResult<SparseVector<S>> {
    match value {
        Value::Object(map) => {
            let entries = map
                .iter()
                .map(|(k, v)| {
                    let i = k.parse::<usize>().map_err(|_| bad(format!("bad vector index `{k}`")))?;
                    Ok((i, rational_from_json(v)?))
                })
                .collect::<FormatResult<Vec<_>>>()?;
            Ok(SparseVector::from_entries(entries)?)
        }
        Value::Array(items) => {
            let dense = items.iter().map(rational_from_json).collect::<FormatResult<Vec<_>>>()?;
            Ok(SparseVector::from_dense(&dense))
        }
        _ => Err(bad("a vector must be an object or an array")),
    }
}

pub fn vector_to_json<S>(v: &SparseVector<S>) -> Value {
    let map: Map<String, Value> = v.iter().map(|(i, r)| (i.to_string(), rational_to_json(r))).collect();
    Value::Object(map)
}

pub fn float_map_to_json(v: &BTreeMap<usize, f64>) -> Value {
    Value::Object(v.iter().map(|(i, r)| (i.to_string(), Value::from(*r))).collect())
}

pub fn indicator_to_json(g: &SignedIndicator) -> Value {
    json!({"set": set_to_json(g.set()), "signs": g.signs_i8()})
}

pub fn indicator_from_json(value: &Value) -> FormatResult<SignedIndicator> {
    let set = set_from_json(value.get("set").ok_or_else(|| bad("indicator needs a `set`"))?)?;
    let signs = value
        .get("signs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("indicator needs `signs`"))?
        .iter()
        .map(|s| {
            let s = s.as_i64().and_then(|n| i8::try_from(n).ok()).ok_or_else(|| bad("signs must be 1 or -1"))?;
            Ok(Sign::from_i8(s)?)
        })
        .collect::<FormatResult<Vec<_>>>()?;
    Ok(SignedIndicator::new(set, signs)?)
}

pub fn decomposition_to_json(d: &Decomposition) -> Value {
    let terms: Vec<Value> = d
        .terms
        .iter()
        .map(|(weight, g)| json!({"weight": rational_to_json(weight), "set": set_to_json(g.set()), "signs": g.signs_i8()}))
        .collect();
    json!({ "terms": terms })
}

pub fn decomposition_from_json(value: &Value) -> FormatResult<Decomposition> {
    let terms = value
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("decomposition needs `terms`"))?
        .iter()
        .map(|t| {
            let weight = rational_from_json(t.get("weight").ok_or_else(|| bad("term needs a `weight`"))?)?;
            Ok((weight, indicator_from_json(t)?))
        })
        .collect::<FormatResult<Vec<_>>>()?;
    Ok(Decomposition { terms })
}

/// Compact JSON text with sorted keys.
pub fn to_canonical(value: &Value) -> String {
    // serde_json keeps object keys in a BTreeMap unless `preserve_order` is on.
    value.to_string()
}

/// Indented `key: value` lines for `--output text`.
pub fn to_text(value: &Value) -> String {
    let mut out = String::new();
    write_text(value, 0, &mut out);
    out
}

fn write_text(value: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if is_scalar_like(v) {
                    out.push_str(&format!("{pad}{k}: {}\n", inline(v)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    write_text(v, depth + 1, out);
                }
            }
        }
        Value::Array(items) if !is_scalar_like(value) => {
            for item in items {
                if is_scalar_like(item) {
                    out.push_str(&format!("{pad}- {}\n", inline(item)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    write_text(item, depth + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

fn is_scalar_like(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_array() && !i.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}
