//! Deterministic report serialization: canonical JSON with sorted keys and
//! fixed-width floats, pinned CSV schemas, content hashing, atomic writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde_json::Value;
use sha2::{Digest, Sha256};

/// Wrap a finite float for the canonical writer; non-finite values are a bug
/// upstream and must never reach a report.
pub fn jf(x: f64) -> Result<Value, String> {
    if !x.is_finite() {
        return Err(format!("refusing to serialize non-finite float {x}"));
    }
    Ok(Value::from(x))
}

/// Render a float with 17 significant digits (one leading digit plus 16
/// after the point, scientific notation), enough to round-trip any f64.
pub fn float17(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Serialize a JSON value canonically: object keys in sorted order, floats
/// at 17 significant digits, no insignificant whitespace beyond a two-space
/// indent. Rejects non-finite floats and any null that would hide one.
pub fn canonical_json(value: &Value) -> Result<String, String> {
    let mut out = String::new();
    write_value(value, 0, &mut out)?;
    out.push('\n');
    Ok(out)
}

fn write_value(value: &Value, depth: usize, out: &mut String) -> Result<(), String> {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                let x = n
                    .as_f64()
                    .ok_or_else(|| format!("unrepresentable number {n}"))?;
                if !x.is_finite() {
                    return Err(format!("refusing to serialize non-finite float {x}"));
                }
                out.push_str(&float17(x));
            }
        }
        Value::String(s) => {
            let _ = write!(out, "{}", Value::String(s.clone()));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return Ok(());
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                push_newline_indent(out, depth + 1);
                write_value(item, depth + 1, out)?;
            }
            push_newline_indent(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return Ok(());
            }
            // serde_json's default map is a BTreeMap, so iteration order is
            // already sorted by key; rely on that for canonical ordering.
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                push_newline_indent(out, depth + 1);
                let _ = write!(out, "{}: ", Value::String(key.clone()));
                write_value(item, depth + 1, out)?;
            }
            push_newline_indent(out, depth);
            out.push('}');
        }
    }
    Ok(())
}

fn push_newline_indent(out: &mut String, depth: usize) {
    out.push('\n');
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// Quote one CSV field per RFC 4180: fields containing commas, quotes, or
/// line breaks are wrapped in double quotes with inner quotes doubled.
pub fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') || raw.contains('\r') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

/// Assemble a CSV document from a header and rows, quoting every field.
pub fn csv_document(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(
        &header
            .iter()
            .map(|h| csv_field(h))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for row in rows {
        out.push_str(
            &row.iter()
                .map(|f| csv_field(f))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
    }
    out
}

/// Content hash of the run inputs: SHA-256 over the canonical JSON of the
/// command name and resolved parameters, hex-encoded.
pub fn input_hash(command: &str, parameters: &Value) -> Result<String, String> {
    let mut wrapper = serde_json::Map::new();
    wrapper.insert("command".into(), Value::String(command.into()));
    wrapper.insert("parameters".into(), parameters.clone());
    let text = canonical_json(&Value::Object(wrapper))?;
    let digest = Sha256::digest(text.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        let _ = write!(hex, "{byte:02x}");
    }
    Ok(hex)
}

/// Write `content` to `path` atomically: a temp file in the same directory
/// is written, flushed, and renamed over the destination.
pub fn atomic_write(path: &Path, content: &str) -> Result<(), String> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let name = path
        .file_name()
        .ok_or_else(|| format!("output path {} has no file name", path.display()))?;
    let tmp_name = format!(".{}.tmp.{}", name.to_string_lossy(), std::process::id());
    let tmp_path = match dir {
        Some(d) => d.join(&tmp_name),
        None => std::path::PathBuf::from(&tmp_name),
    };
    let write = || -> std::io::Result<()> {
        let mut file = std::fs::File::create(&tmp_path)?;
        file.write_all(content.as_bytes())?;
        file.sync_all()?;
        drop(file);
        std::fs::rename(&tmp_path, path)
    };
    write().map_err(|e| {
        let _ = std::fs::remove_file(&tmp_path);
        format!("cannot write report to {}: {e}", path.display())
    })
}
