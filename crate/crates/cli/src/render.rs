use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::config::Format;
use crate::Failure;

/// One `key: value` line per leaf; nested keys are joined with dots.
pub fn to_text(value: &Value) -> String {
    let mut out = String::new();
    flatten(value, String::new(), &mut out);
    out
}

fn flatten(value: &Value, prefix: String, out: &mut String) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(v, join(k), out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, join(&i.to_string()), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

pub fn emit(value: &Value, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let body = match format {
        Format::Json => serde_json::to_string_pretty(value).expect("json values serialize") + "\n",
        _ => to_text(value),
    };
    write(&body, out)
}

pub fn write(body: &str, out: Option<&Path>) -> Result<(), Failure> {
    let result = match out {
        Some(path) => std::fs::write(path, body),
        None => match std::io::stdout().lock().write_all(body.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            other => other,
        },
    };
    result.map_err(|e| Failure {
        code: Failure::USAGE,
        message: match out {
            Some(p) => format!("cannot write {}: {e}", p.display()),
            None => format!("cannot write to stdout: {e}"),
        },
    })
}
