//! Parameter declarations and validated parameter sets.

use crate::error::{invalid, QhjError, Result};
use crate::exact::{parse_rational, Scalar};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Kind of value a parameter accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    Real,
    PositiveInteger,
    NonNegativeInteger,
}

/// Declaration of one model parameter.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    pub kind: ParamKind,
    pub range: String,
    pub default: Option<String>,
    pub description: String,
}

impl ParamSpec {
    pub(crate) fn new(name: &str, kind: ParamKind, range: &str, default: Option<&str>, description: &str) -> Self {
        Self {
            name: name.into(),
            kind,
            range: range.into(),
            default: default.map(Into::into),
            description: description.into(),
        }
    }
}

/// Validated parameter values, exact when given as rationals.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamSet {
    values: BTreeMap<String, Scalar>,
}

/// Raw parameter input: numbers or strings such as `"7/2"`.
pub type RawParams = BTreeMap<String, serde_json::Value>;

fn parse_value(name: &str, v: &serde_json::Value) -> Result<Scalar> {
    match v {
        serde_json::Value::Number(n) => {
            let s = n.to_string();
            if let Some(r) = parse_rational(&s) {
                return Ok(Scalar::from_rational(r));
            }
            let x: f64 = s.parse().map_err(|_| invalid(name, format!("not a number: {s}")))?;
            Ok(Scalar::real(x))
        }
        serde_json::Value::String(s) => parse_str(name, s),
        other => Err(invalid(name, format!("expected a number, got {other}"))),
    }
}

pub(crate) fn parse_str(name: &str, s: &str) -> Result<Scalar> {
    if let Some(r) = parse_rational(s) {
        return Ok(Scalar::from_rational(r));
    }
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| invalid(name, format!("not a number: `{s}`")))?;
    if !x.is_finite() {
        return Err(invalid(name, "must be finite"));
    }
    Ok(Scalar::real(x))
}

impl ParamSet {
    /// Validate raw input against a list of declarations.
    pub fn from_raw(specs: &[ParamSpec], raw: &RawParams) -> Result<Self> {
        for key in raw.keys() {
            if !specs.iter().any(|s| &s.name == key) {
                return Err(invalid(key, "unknown parameter for this model"));
            }
        }
        let mut values = BTreeMap::new();
        for spec in specs {
            let v = match (raw.get(&spec.name), &spec.default) {
                (Some(v), _) => parse_value(&spec.name, v)?,
                (None, Some(d)) => parse_str(&spec.name, d)?,
                (None, None) => return Err(invalid(&spec.name, "required")),
            };
            match spec.kind {
                ParamKind::Real => {}
                ParamKind::PositiveInteger | ParamKind::NonNegativeInteger => {
                    let min = if spec.kind == ParamKind::PositiveInteger { 1 } else { 0 };
                    match v.as_nonnegative_integer(0.0) {
                        Some(k) if k >= min => {}
                        _ => {
                            return Err(invalid(
                                &spec.name,
                                format!("expected an integer >= {min}, got {v}"),
                            ))
                        }
                    }
                }
            }
            values.insert(spec.name.clone(), v);
        }
        Ok(Self { values })
    }

    pub fn scalar(&self, name: &str) -> Scalar {
        self.values[name]
    }

    pub fn real(&self, name: &str) -> f64 {
        self.values[name].re()
    }

    pub fn integer(&self, name: &str) -> u32 {
        self.values[name]
            .as_nonnegative_integer(0.0)
            .expect("integer parameter validated at construction")
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Scalar)> {
        self.values.iter()
    }

    /// Serialisable view with exact values rendered as fractions.
    pub fn to_json(&self) -> serde_json::Value {
        let map = self
            .values
            .iter()
            .map(|(k, v)| {
                let val = match v.exact {
                    Some(q) if q.re.is_integer() => serde_json::json!(*q.re.numer()),
                    Some(q) => serde_json::Value::String(q.to_string()),
                    None => serde_json::json!(v.re()),
                };
                (k.clone(), val)
            })
            .collect();
        serde_json::Value::Object(map)
    }
}

pub(crate) fn require(cond: bool, name: &str, reason: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(QhjError::InvalidParameter { name: name.into(), reason: reason.into() })
    }
}
