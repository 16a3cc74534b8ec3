//! Plain-text rendering of report envelopes.

use std::fmt::Write;

use serde_json::Value;

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn emit(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::String(s) if s.contains('\n') => {
            let _ = writeln!(out, "{pad}{key}:");
            for line in s.lines() {
                let _ = writeln!(out, "{pad}  {line}");
            }
        }
        _ if is_flat(v) => {
            let _ = writeln!(out, "{pad}{key}: {}", scalar(v));
        }
        Value::Object(map) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, item) in map {
                emit(out, k, item, depth + 1);
            }
        }
        Value::Array(items) => {
            let _ = writeln!(out, "{pad}{key}: {} entries", items.len());
            for (i, item) in items.iter().enumerate() {
                emit(out, &format!("[{i}]"), item, depth + 1);
            }
        }
        _ => unreachable!("flat values handled above"),
    }
}

pub fn render(envelope: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {}",
        scalar(&envelope["tool"]),
        scalar(&envelope["version"])
    );
    let _ = writeln!(out, "config: {}", envelope["config"]);
    if let Value::Object(map) = &envelope["report"] {
        for (k, v) in map {
            emit(&mut out, k, v, 0);
        }
    }
    out
}
