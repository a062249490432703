//! Simple key=value defaults file. Flags always take precedence: each
//! command fills only the options the user left unset.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;

use crate::{CmdResult, Failure};

const KNOWN_KEYS: &[&str] = &[
    "theory", "rho", "x", "r1", "r2", "d", "xmin", "xmax", "points", "nmax", "tol", "out",
    "format", "variant", "kind", "basis",
];

#[derive(Debug, Default)]
pub struct FileConfig {
    map: BTreeMap<String, String>,
}

impl FileConfig {
    /// Parse a config file: one `key = value` per line, `#` comments.
    /// Unknown keys are rejected so typos fail loudly.
    pub fn load(path: &Path) -> CmdResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::invalid(format!("cannot read config {}: {e}", path.display())))?;
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Failure::invalid(format!(
                    "{}:{}: expected key=value, got {raw:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Failure::invalid(format!(
                    "{}:{}: unknown config key {key:?}",
                    path.display(),
                    lineno + 1
                )));
            }
            map.insert(key, value.trim().to_string());
        }
        Ok(Self { map })
    }

    /// Load when a path was given, empty defaults otherwise.
    pub fn load_optional(path: Option<&Path>) -> CmdResult<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }

    /// Parse the value under `key`, if present.
    pub fn parsed<T: FromStr>(&self, key: &str) -> CmdResult<Option<T>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| {
                Failure::invalid(format!("config key {key} has unparsable value {raw:?}"))
            }),
        }
    }

    /// Parse an enum-valued key through its command-line value names.
    pub fn variant<T: ValueEnum>(&self, key: &str) -> CmdResult<Option<T>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => T::from_str(raw, true).map(Some).map_err(|_| {
                Failure::invalid(format!("config key {key} has unknown value {raw:?}"))
            }),
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }
}
