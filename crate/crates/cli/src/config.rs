//! Key-value run configuration: `key = value` lines, `#`/`;` comments, and
//! optional `[command]` sections whose keys apply only to that command.
//! Flags given on the command line override the file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("invalid value for {key}: {value:?} ({reason})")]
    Value { key: String, value: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub command: String,
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), values: BTreeMap::new() }
    }

    /// Keys outside any section and keys in `[command]` are kept; the
    /// section wins over the top level.
    pub fn parse(command: &str, text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::new(command);
        let mut scoped = BTreeMap::new();
        let mut section: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = Some(name.trim().to_string());
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError::Syntax { line: i + 1, text: raw.to_string() });
            };
            let (k, v) = (normalize_key(k), v.trim().to_string());
            if k.is_empty() {
                return Err(ConfigError::Syntax { line: i + 1, text: raw.to_string() });
            }
            match &section {
                None => {
                    cfg.values.insert(k, v);
                }
                Some(s) if s == command => {
                    scoped.insert(k, v);
                }
                Some(_) => {}
            }
        }
        cfg.values.extend(scoped);
        Ok(cfg)
    }

    pub fn load(command: &str, path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::parse(command, &text)
    }

    pub fn set(&mut self, key: &str, value: impl fmt::Display) {
        self.values.insert(normalize_key(key), value.to_string());
    }

    pub fn set_opt<T: fmt::Display>(&mut self, key: &str, value: Option<T>) {
        if let Some(v) = value {
            self.set(key, v);
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>().map_err(|e| ConfigError::Value {
                    key: key.to_string(),
                    value: v.to_string(),
                    reason: e.to_string(),
                })
            })
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let Some(v) = self.raw(key) else { return Ok(None) };
        v.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<T>().map_err(|e| ConfigError::Value {
                    key: key.to_string(),
                    value: s.to_string(),
                    reason: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    pub fn seed(&self) -> Result<u64, ConfigError> {
        self.get_or("seed", 0)
    }

    pub fn out_dir(&self) -> Option<PathBuf> {
        self.raw("out_dir").map(PathBuf::from)
    }
}

fn normalize_key(k: &str) -> String {
    k.trim().replace('-', "_")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_comments() {
        let text = "r = 0.2\n# comment\nseed=3 ; trailing\n[model-classify]\nr = -0.1\n[other]\nr = 9\n";
        let c = RunConfig::parse("model-classify", text).unwrap();
        assert_eq!(c.get::<f64>("r").unwrap(), Some(-0.1));
        assert_eq!(c.seed().unwrap(), 3);
        let d = RunConfig::parse("tpoint-find", text).unwrap();
        assert_eq!(d.get::<f64>("r").unwrap(), Some(0.2));
    }

    #[test]
    fn bad_lines_and_values() {
        assert!(matches!(RunConfig::parse("x", "oops"), Err(ConfigError::Syntax { line: 1, .. })));
        let c = RunConfig::parse("x", "r = abc\nlist = 1, 2,3").unwrap();
        assert!(c.get::<f64>("r").is_err());
        assert_eq!(c.list::<u32>("list").unwrap(), Some(vec![1, 2, 3]));
    }

    #[test]
    fn flags_override_file() {
        let mut c = RunConfig::parse("x", "word-list = LR").unwrap();
        c.set("word_list", "LLR");
        assert_eq!(c.raw("word_list"), Some("LLR"));
    }
}
