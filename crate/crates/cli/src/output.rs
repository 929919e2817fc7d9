//! Serialization: JSON and CSV with every float at 17 significant digits.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Number, Value};

use crate::CliError;

/// `{:.16e}` gives 17 significant digits, enough to round-trip any f64.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn widen(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            Value::Number(float(x).parse::<Number>().expect("formatted float is valid JSON"))
        }
        Value::Array(items) => Value::Array(items.into_iter().map(widen).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, widen(v))).collect()),
        other => other,
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Numerical(format!("cannot serialize: {e}")))?;
    let mut s = serde_json::to_string_pretty(&widen(v)).map_err(|e| CliError::Numerical(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
