//! Deterministic number formatting and the three output encodings.

use serde_json::Value;

/// Rounds to 15 significant digits; the result prints as its shortest
/// round-trip representation.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Text/CSV rendering of a number.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    format!("{:?}", round15(x))
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// JSON number (null when absent or non-finite).
pub fn jnum(x: f64) -> Value {
    if x.is_finite() {
        Value::from(round15(x))
    } else {
        Value::Null
    }
}

pub fn opt_jnum(x: Option<f64>) -> Value {
    x.map(jnum).unwrap_or(Value::Null)
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Quotes a CSV field when it contains a separator, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_line(fields: &[String]) -> String {
    let mut line = fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}
