//! Output helpers: round-trip-safe float formatting, CSV assembly and
//! file-or-stdout emission. Identical inputs produce byte-identical output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::CmdResult;

/// 17 significant digits: enough to round-trip any f64.
pub fn float17(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV with a header row, comma separator, no quoting (field names and
/// numbers never contain commas), trailing newline.
pub fn csv_document(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut doc = header.join(",");
    doc.push('\n');
    for row in rows {
        doc.push_str(&row.join(","));
        doc.push('\n');
    }
    doc
}

/// RFC 4180 quoting for fields that contain commas or quotes.
pub fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

/// Pretty JSON with a trailing newline.
pub fn json_document<T: Serialize>(value: &T) -> String {
    let mut doc = serde_json::to_string_pretty(value).expect("serializable value");
    doc.push('\n');
    doc
}

/// Write to the file when a path is given, stdout otherwise.
pub fn emit(out: Option<&Path>, content: &str) -> CmdResult<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(path, content)?;
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float17_round_trips() {
        for &v in &[
            0.1,
            -0.41463715855682903,
            1069.5645572,
            1e-300,
            -9.56647622491e-2,
        ] {
            let s = float17(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, v, "{s}");
        }
    }

    #[test]
    fn csv_layout() {
        let doc = csv_document(
            &["a", "b"],
            &[vec!["1".into(), "2".into()], vec!["3".into(), "4".into()]],
        );
        assert_eq!(doc, "a,b\n1,2\n3,4\n");
    }
}
