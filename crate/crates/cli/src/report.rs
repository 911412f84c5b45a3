//! Run reports and their canonical JSON rendering.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub certificates: Value,
    pub seed: u64,
    pub versions: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
}

impl RunReport {
    pub fn new(command: &str, seed: u64) -> Self {
        RunReport {
            command: command.to_string(),
            inputs: Value::Object(Map::new()),
            outputs: Value::Object(Map::new()),
            certificates: Value::Object(Map::new()),
            seed,
            versions: version_string(),
        }
    }
}

pub fn version_string() -> String {
    format!("rowcol {}", env!("CARGO_PKG_VERSION"))
}

/// `"p/q"`, the wire form of exact rationals.
pub fn rational(q: &BigRational) -> Value {
    Value::String(format!("{}/{}", q.numer(), q.denom()))
}

pub fn integer_ratio(p: &BigInt, q: &BigInt) -> Value {
    rational(&BigRational::new(p.clone(), q.clone()))
}

pub fn emit(report: &RunReport, format: Format) -> String {
    let value = serde_json::to_value(report).expect("reports are plain JSON values");
    match format {
        Format::Json => {
            let mut out = String::new();
            write_canonical(&value, &mut out);
            out.push('\n');
            out
        }
        Format::Table => {
            let mut out = String::new();
            write_table("", &value, &mut out);
            out
        }
    }
}

pub fn parse(text: &str) -> serde_json::Result<RunReport> {
    serde_json::from_str(text)
}

/// Compact JSON with sorted keys; floats carry 17 significant digits.
pub fn write_canonical(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().expect("checked");
                let _ = write!(out, "{x:.16e}");
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        Value::Array(items) => {
            out.push('[');
            for (k, v) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write_canonical(v, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (k, key) in keys.into_iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("strings serialize"));
                out.push(':');
                write_canonical(&map[key], out);
            }
            out.push('}');
        }
    }
}

fn write_table(path: &str, value: &Value, out: &mut String) {
    match value {
        Value::Object(map) if !map.is_empty() => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for key in keys {
                let p = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
                write_table(&p, &map[key], out);
            }
        }
        Value::Array(items) if items.len() > 8 || items.iter().any(|v| v.is_object() || v.is_array()) => {
            let _ = writeln!(out, "{path:<40} [{} items]", items.len());
        }
        Value::Number(n) if n.is_f64() => {
            let _ = writeln!(out, "{path:<40} {:.10}", n.as_f64().expect("checked"));
        }
        other => {
            let _ = writeln!(out, "{path:<40} {other}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_keep_seventeen_digits() {
        let mut s = String::new();
        write_canonical(&json!({"b": 0.1, "a": [1, -2, 2.0]}), &mut s);
        assert_eq!(s, r#"{"a":[1,-2,2.0000000000000000e0],"b":1.0000000000000001e-1}"#);
    }

    #[test]
    fn empty_report_is_valid_json() {
        let r = RunReport::new("noop", 0);
        let text = emit(&r, Format::Json);
        assert_eq!(parse(&text).unwrap(), r);
    }
}
