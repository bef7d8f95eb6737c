//! Plain-text `key = value` configuration files for the command-line driver.
//!
//! One setting per line, `#` starts a comment. Keys match the long flag names
//! (`snr-start`, `solver`, ...); underscores and dashes are interchangeable.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Environment variable holding the default output directory.
pub const OUT_DIR_ENV: &str = "MWRC_OUT_DIR";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Config(format!("line {}: expected key = value, got {raw:?}", i + 1)));
            };
            let key = normalize(k);
            if key.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", i + 1)));
            }
            if values.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key {key:?}", i + 1)));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.keys().find(|k| !allowed.contains(k)) {
            Some(k) => Err(Error::Config(format!("unknown config key {k:?}"))),
            None => Ok(()),
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(&normalize(key)).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| Error::Config(format!("config key {key:?} = {v:?}: {e}"))))
            .transpose()
    }

    /// Booleans accept `true/false`, `yes/no`, `1/0`, `on/off`.
    pub fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        self.raw(key)
            .map(|v| match v.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" | "on" => Ok(true),
                "false" | "no" | "0" | "off" => Ok(false),
                _ => Err(Error::Config(format!("config key {key:?} = {v:?} is not a boolean"))),
            })
            .transpose()
    }

    /// The flag value when given, otherwise the file value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

/// Comma-separated list, e.g. `df, nnc,af-snd`.
pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|e| Error::Config(format!("{p:?}: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_normalizes_keys() {
        let c = ConfigFile::parse("# sweep\nsnr_start = -5\n\nSchemes = df, nnc  # two\n").unwrap();
        assert_eq!(c.get::<f64>("snr-start").unwrap(), Some(-5.0));
        assert_eq!(c.raw("schemes"), Some("df, nnc"));
        assert_eq!(c.get::<f64>("snr-stop").unwrap(), None);
        assert!(c.check_keys(&["snr-start", "schemes"]).is_ok());
        assert!(c.check_keys(&["snr-start"]).is_err());
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(ConfigFile::parse("oops").is_err());
        assert!(ConfigFile::parse("a = 1\na = 2").is_err());
        assert!(ConfigFile::parse(" = 1").is_err());
        let c = ConfigFile::parse("snr-step = fast\nquick = maybe").unwrap();
        assert!(c.get::<f64>("snr-step").is_err());
        assert!(c.get_bool("quick").is_err());
    }

    #[test]
    fn flags_win() {
        let c = ConfigFile::parse("phi = 4").unwrap();
        assert_eq!(c.pick(Some(5.0), "phi").unwrap(), Some(5.0));
        assert_eq!(c.pick(None::<f64>, "phi").unwrap(), Some(4.0));
    }

    #[test]
    fn lists() {
        let v: Vec<f64> = parse_list("0, 0.5,1,").unwrap();
        assert_eq!(v, vec![0.0, 0.5, 1.0]);
        assert!(parse_list::<f64>("a").is_err());
    }
}
