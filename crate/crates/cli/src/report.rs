//! Number formatting and report serialization.
//!
//! Floats are written with 17 significant digits so reports round-trip
//! bit for bit; non-finite values become the strings `"inf"`, `"-inf"` and
//! `"nan"`. Object keys come out sorted.

use std::str::FromStr;

use mfnorm::extended::Extended;
use mfnorm::geometry::DualFrequency;
use mfnorm::transforms::fmt17;
use serde_json::{Map, Number, Value};

pub fn num(x: f64) -> Value {
    if x.is_nan() {
        return Value::String("nan".into());
    }
    if x.is_infinite() {
        return Value::String(fmt17(x));
    }
    Value::Number(Number::from_str(&fmt17(x)).expect("formatted float is valid JSON"))
}

pub fn ext(x: Extended<f64>) -> Value {
    match x {
        Extended::Finite(v) => num(v),
        Extended::Infinite => Value::String("inf".into()),
    }
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn int(n: i64) -> Value {
    Value::Number(n.into())
}

/// CSV cell for a frequency: integers stay integers.
pub fn freq_cell(xi: DualFrequency<f64>) -> String {
    match xi {
        DualFrequency::Integer(n) => n.to_string(),
        DualFrequency::Real(x) => fmt17(x),
    }
}

pub fn ext_cell(x: Extended<f64>) -> String {
    match x {
        Extended::Finite(v) => fmt17(v),
        Extended::Infinite => "inf".into(),
    }
}

/// Builds an object from `(key, value)` pairs.
pub fn object<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

/// Flattens a report into `key,value` rows with dotted paths.
pub fn flatten_csv(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, child, rows);
                }
            }
            Value::Array(items) => {
                for (i, child) in items.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), child, rows);
                }
            }
            Value::String(s) => rows.push((prefix.into(), s.clone())),
            Value::Null => rows.push((prefix.into(), String::new())),
            other => rows.push((prefix.into(), other.to_string())),
        }
    }
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out += &format!("{k},{v}\n");
    }
    out
}
