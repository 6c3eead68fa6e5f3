//! Flat `key = value` configuration files. Keys are long flag names without the dashes
//! prefix; `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;

pub const KEYS: &[&str] = &[
    "kind",
    "aspect",
    "ka",
    "ka-min",
    "ka-max",
    "points",
    "spacing",
    "tol-rel",
    "tol-abs",
    "max-subdivisions",
    "format",
    "out",
    "mesh-n",
    "max-rel",
    "jobs",
];

#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, (usize, String)>,
    source: String,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{source}:{line_no}: expected key = value, found \"{line}\""))?;
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                bail!("{source}:{line_no}: unknown key \"{key}\"");
            }
            if values
                .insert(key.clone(), (line_no, value.trim().to_string()))
                .is_some()
            {
                bail!("{source}:{line_no}: key \"{key}\" given twice");
            }
        }
        Ok(Config {
            values,
            source: source.to_string(),
        })
    }

    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.values.get(key)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|e| anyhow!("{}:{line}: invalid value for {key}: {e}", self.source)),
        }
    }

    pub fn get_enum<T: ValueEnum>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => T::from_str(v, true)
                .map(Some)
                .map_err(|e| anyhow!("{}:{line}: invalid value for {key}: {e}", self.source)),
        }
    }
}

/// Flag value if given, else the config value, else the default.
pub fn pick<T: FromStr>(flag: Option<T>, cfg: &Config, key: &str, default: T) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    Ok(match flag {
        Some(v) => v,
        None => cfg.get(key)?.unwrap_or(default),
    })
}

pub fn pick_enum<T: ValueEnum>(flag: Option<T>, cfg: &Config, key: &str, default: T) -> Result<T> {
    Ok(match flag {
        Some(v) => v,
        None => cfg.get_enum(key)?.unwrap_or(default),
    })
}
