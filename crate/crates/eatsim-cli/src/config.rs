//! key=value configuration files. Flags beat file values; file values beat
//! defaults. Unknown keys are rejected so typos fail loudly.

use eatsim::{Error, Result};
use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

const KNOWN_KEYS: &[&str] = &[
    "seed",
    "threads",
    "omega",
    "metric",
    "linkage",
    "alpha",
    "beta",
    "reshuffles",
    "candidates",
    "dim",
    "walks_per_node",
    "walk_length",
    "window",
    "return_bias",
    "inout_bias",
    "negative_samples",
    "epochs",
    "learning_rate",
];

#[derive(Debug, Default)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut values = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                msg: format!("expected key=value, got {line:?}"),
            })?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!(
                        "unknown config key {key:?} (known: {})",
                        KNOWN_KEYS.join(", ")
                    ),
                });
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        debug_assert!(KNOWN_KEYS.contains(&key));
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::validation(format!("config key {key} has unusable value {raw:?}"))
            }),
        }
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// CLI > config file > default.
pub fn pick<T>(cli: Option<T>, file: Option<T>, default: T) -> T {
    cli.or(file).unwrap_or(default)
}
