//! Flat key/value configuration with dotted sections.
//!
//! One `key = value` pair per line, full-line `#` comments, blank lines
//! ignored. Keys carry unit suffixes (`_m`, `_hz`, `_w`, `_db`). Every read
//! records the resolved value (defaults included) so the runner can echo the
//! effective parameter set and reject unrecognized keys.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use crate::CliError;

#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
    resolved: RefCell<BTreeMap<String, String>>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(CliError::config(format!(
                    "line {}: empty key or value",
                    lineno + 1
                )));
            }
            if values.insert(key.clone(), value).is_some() {
                return Err(CliError::config(format!(
                    "line {}: duplicate key `{key}`",
                    lineno + 1
                )));
            }
        }
        Ok(Config {
            values,
            ..Default::default()
        })
    }

    /// Overlays `key = value` pairs (command-line overrides) on this config.
    pub fn set(&mut self, key: &str, value: String) {
        self.values.insert(key.to_string(), value);
    }

    fn record(&self, key: &str, resolved: String) {
        self.used.borrow_mut().insert(key.to_string());
        self.resolved.borrow_mut().insert(key.to_string(), resolved);
    }

    pub fn get_str(&self, key: &str) -> Option<String> {
        let v = self.values.get(key).cloned();
        if let Some(ref v) = v {
            self.record(key, v.clone());
        }
        v
    }

    pub fn str_or(&self, key: &str, default: &str) -> String {
        let v = self
            .values
            .get(key)
            .cloned()
            .unwrap_or_else(|| default.to_string());
        self.record(key, v.clone());
        v
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => {
                let v: f64 = raw.parse().map_err(|_| {
                    CliError::config(format!("parameter `{key}`: `{raw}` is not a number"))
                })?;
                self.record(key, format!("{v}"));
                Ok(Some(v))
            }
        }
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        let v = self.get_f64(key)?.unwrap_or(default);
        self.record(key, format!("{v}"));
        Ok(v)
    }

    pub fn req_f64(&self, key: &str) -> Result<f64, CliError> {
        self.get_f64(key)?
            .ok_or_else(|| CliError::config(format!("missing required parameter `{key}`")))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.values.get(key) {
            None => {
                self.record(key, format!("{default}"));
                Ok(default)
            }
            Some(raw) => {
                let v: usize = raw.parse().map_err(|_| {
                    CliError::config(format!(
                        "parameter `{key}`: `{raw}` is not a nonnegative integer"
                    ))
                })?;
                self.record(key, format!("{v}"));
                Ok(v)
            }
        }
    }

    pub fn req_usize(&self, key: &str) -> Result<usize, CliError> {
        match self.values.get(key) {
            None => Err(CliError::config(format!(
                "missing required parameter `{key}`"
            ))),
            Some(raw) => {
                let v: usize = raw.parse().map_err(|_| {
                    CliError::config(format!(
                        "parameter `{key}`: `{raw}` is not a nonnegative integer"
                    ))
                })?;
                self.record(key, format!("{v}"));
                Ok(v)
            }
        }
    }

    /// Comma-separated list of numbers.
    pub fn list_f64_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        let v = match self.values.get(key) {
            None => default.to_vec(),
            Some(raw) => raw
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| {
                        CliError::config(format!(
                            "parameter `{key}`: `{}` is not a number",
                            s.trim()
                        ))
                    })
                })
                .collect::<Result<Vec<f64>, CliError>>()?,
        };
        let printed: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
        self.record(key, printed.join(","));
        Ok(v)
    }

    /// The effective parameter set after all reads, sorted by key.
    pub fn resolved(&self) -> Vec<(String, String)> {
        self.resolved
            .borrow()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    /// Keys present in the config that no scenario read.
    pub fn unused_keys(&self) -> Vec<String> {
        let used = self.used.borrow();
        self.values
            .keys()
            .filter(|k| !used.contains(*k))
            .cloned()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_values_comments_and_blanks() {
        let cfg = Config::parse(
            "# a comment\n\nscenario = kappa-sweep\nlink.distance_m = 100\nsweep.points = 21\n",
        )
        .unwrap();
        assert_eq!(cfg.get_str("scenario").unwrap(), "kappa-sweep");
        assert_eq!(cfg.req_f64("link.distance_m").unwrap(), 100.0);
        assert_eq!(cfg.usize_or("sweep.points", 5).unwrap(), 21);
        assert!(cfg.unused_keys().is_empty());
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        assert!(Config::parse("a = 1\na = 2\n").is_err());
        assert!(Config::parse("just words\n").is_err());
    }

    #[test]
    fn tracks_unused_and_resolved() {
        let cfg = Config::parse("a.b = 1\nc.d = 2\n").unwrap();
        let _ = cfg.req_f64("a.b").unwrap();
        let _ = cfg.f64_or("e.f", 7.0).unwrap();
        assert_eq!(cfg.unused_keys(), vec!["c.d".to_string()]);
        let resolved = cfg.resolved();
        assert!(resolved.contains(&("a.b".to_string(), "1".to_string())));
        assert!(resolved.contains(&("e.f".to_string(), "7".to_string())));
    }

    #[test]
    fn parses_lists() {
        let cfg = Config::parse("xpd.kappa_list = 0, 0.1, 0.5\n").unwrap();
        assert_eq!(
            cfg.list_f64_or("xpd.kappa_list", &[]).unwrap(),
            vec![0.0, 0.1, 0.5]
        );
    }
}
