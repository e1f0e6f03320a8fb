//! Deterministic CSV and JSON output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

/// Scientific notation with 17 significant digits, enough to round-trip any f64.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_string<R: AsRef<[f64]>>(header: &[&str], rows: impl IntoIterator<Item = R>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        for (i, v) in row.as_ref().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", format_f64(*v));
        }
        out.push('\n');
    }
    out
}

/// Recursively rebuilds objects with keys in lexicographic order.
pub fn sort_keys(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut sorted = Map::new();
            for (k, v) in entries {
                sorted.insert(k, sort_keys(v));
            }
            Value::Object(sorted)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

pub fn json_string<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(&sort_keys(serde_json::to_value(value)?))?;
    s.push('\n');
    Ok(s)
}

/// Writes through a temporary sibling file and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits_round_trip() {
        for &x in &[0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap();
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
    }

    #[test]
    fn csv_layout() {
        let s = csv_string(&["a", "b"], [[1.0, 2.0], [3.0, 4.0]]);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "a,b");
        assert_eq!(lines[1], "1.0000000000000000e0,2.0000000000000000e0");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn nested_keys_sorted() {
        let v = serde_json::json!({"z": 1, "a": {"y": 2, "b": [ {"d": 1, "c": 2} ]}});
        let s = json_string(&v).unwrap();
        let pos = |k: &str| s.find(k).unwrap();
        assert!(pos("\"a\"") < pos("\"z\""));
        assert!(pos("\"b\"") < pos("\"y\""));
        assert!(pos("\"c\"") < pos("\"d\""));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/x.csv");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
