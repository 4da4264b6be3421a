//! JSON, CSV and pattern-argument codecs.
//!
//! Rationals are `"p/q"` strings (the `/q` is dropped when `q = 1`), maps are
//! `{"breakpoints": [["x", "y"], ...]}`, orbits and intervals are ascending
//! arrays of rationals.

use serde_json::{json, Map, Value};
use sharkovsky_core::tent::SpectrumEntry;
use sharkovsky_core::{
    CyclicPattern, Interval, IntervalLoop, Orbit, ParseRationalError, PwlMap, Rational,
};

pub const SCHEMA: &str = "sharkovsky-lab/1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected {expected} at {path}")]
    Shape {
        expected: &'static str,
        path: String,
    },
    #[error("invalid rational {text:?} at {path}: {source}")]
    Rational {
        text: String,
        path: String,
        source: ParseRationalError,
    },
    #[error("unsupported schema {0:?}")]
    Schema(String),
    #[error(transparent)]
    Core(#[from] sharkovsky_core::Error),
}

fn shape(expected: &'static str, path: &str) -> FormatError {
    FormatError::Shape {
        expected,
        path: path.to_string(),
    }
}

/// A JSON object that starts with the schema tag.
pub fn document() -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), SCHEMA.into());
    m
}

pub fn rational(x: &Rational) -> Value {
    Value::String(x.to_string())
}

pub fn rationals<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(xs.into_iter().map(rational).collect())
}

pub fn interval(j: &Interval) -> Value {
    json!([rational(j.lo()), rational(j.hi())])
}

pub fn orbit(o: &Orbit) -> Value {
    rationals(o.points())
}

pub fn interval_loop(lp: &IntervalLoop) -> Value {
    Value::Array(lp.intervals().iter().map(interval).collect())
}

pub fn map(f: &PwlMap) -> Value {
    let pairs: Vec<Value> = f
        .breakpoints()
        .map(|(x, y)| json!([rational(x), rational(y)]))
        .collect();
    json!({ "breakpoints": pairs })
}

pub fn spectrum(entries: &[SpectrumEntry]) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|e| json!({ "period": e.period, "orbits": e.orbit_count, "continuum": e.continuum }))
            .collect(),
    )
}

/// `period,orbit_count,continuum` with a header line.
pub fn spectrum_csv(entries: &[SpectrumEntry]) -> String {
    let mut out = String::from("period,orbit_count,continuum\n");
    for e in entries {
        out.push_str(&format!("{},{},{}\n", e.period, e.orbit_count, e.continuum));
    }
    out
}

pub fn rational_from(v: &Value, path: &str) -> Result<Rational, FormatError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() => n.to_string(),
        _ => return Err(shape("a rational string", path)),
    };
    text.parse().map_err(|source| FormatError::Rational {
        text,
        path: path.to_string(),
        source,
    })
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array().ok_or_else(|| shape("an array", path))
}

fn check_schema(v: &Value) -> Result<(), FormatError> {
    match v.get("schema") {
        None => Ok(()),
        Some(Value::String(s)) if s == SCHEMA => Ok(()),
        Some(other) => Err(FormatError::Schema(other.to_string())),
    }
}

pub fn map_from(v: &Value) -> Result<PwlMap, FormatError> {
    check_schema(v)?;
    let bps = array(
        v.get("breakpoints")
            .ok_or_else(|| shape("a breakpoints field", "$"))?,
        "$.breakpoints",
    )?;
    let mut pairs = Vec::with_capacity(bps.len());
    for (i, pair) in bps.iter().enumerate() {
        let path = format!("$.breakpoints[{i}]");
        match array(pair, &path)?.as_slice() {
            [x, y] => pairs.push((
                rational_from(x, &format!("{path}[0]"))?,
                rational_from(y, &format!("{path}[1]"))?,
            )),
            _ => return Err(shape("an [x, y] pair", &path)),
        }
    }
    Ok(PwlMap::from_breakpoints(pairs)?)
}

pub fn orbit_from(v: &Value) -> Result<Orbit, FormatError> {
    let points = array(v, "$")?
        .iter()
        .enumerate()
        .map(|(i, x)| rational_from(x, &format!("$[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Orbit::from_points(points)?)
}

pub fn parse_map(text: &str) -> Result<PwlMap, FormatError> {
    map_from(&serde_json::from_str(text)?)
}

pub fn parse_orbit(text: &str) -> Result<Orbit, FormatError> {
    orbit_from(&serde_json::from_str(text)?)
}

/// Cycle notation `1>3>2`, or a JSON list of images `[3, 1, 2]`.
pub fn parse_pattern(text: &str) -> Result<CyclicPattern, FormatError> {
    let text = text.trim();
    if text.starts_with('[') {
        let images: Vec<usize> = serde_json::from_str(text)?;
        Ok(CyclicPattern::from_images(images)?)
    } else {
        Ok(CyclicPattern::from_cycle_notation(text)?)
    }
}

/// Comma-separated node list `1,2,2`.
pub fn parse_walk(text: &str) -> Result<Vec<usize>, FormatError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| shape("a comma-separated node list", text))
        })
        .collect()
}
