use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{FxError, Result};

/// Flat `key = value` settings. Blank lines and `#` comments are ignored;
/// keys use the long flag names (`digits`, `frac`, `data-dir`, ...).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| FxError::Parse(format!("config line {}: expected key = value", i + 1)))?;
            let key = k.trim().replace('_', "-");
            if values.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(FxError::Parse(format!("config line {}: duplicate key {key}", i + 1)));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse()
                    .map_err(|e| FxError::Parse(format!("config key {key} = {v:?}: {e}")))
            })
            .transpose()
    }

    /// Rejects keys outside `known` so typos do not pass silently.
    pub fn ensure_known(&self, known: &[&str]) -> Result<()> {
        match self.values.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(FxError::Parse(format!("unknown config key {k:?}"))),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_types() {
        let c = ConfigFile::parse("# sweep\nepochs = 12\ndata_dir=./mnist  # local\n\nmodes = rn,rr\n").unwrap();
        assert_eq!(c.get::<usize>("epochs").unwrap(), Some(12));
        assert_eq!(c.raw("data-dir"), Some("./mnist"));
        assert_eq!(c.get::<usize>("hidden").unwrap(), None);
        assert!(c.get::<usize>("modes").is_err());
        assert!(c.ensure_known(&["epochs", "data-dir", "modes"]).is_ok());
        assert!(c.ensure_known(&["epochs"]).is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(ConfigFile::parse("epochs 12").is_err());
        assert!(ConfigFile::parse("a=1\na=2").is_err());
    }
}
