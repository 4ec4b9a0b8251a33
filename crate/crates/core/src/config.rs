//! Run configuration: enumeration cap, tolerance, output format, workers.
//!
//! The file format is one `key = value` pair per line; `#` starts a comment.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub const CAP_ENV: &str = "REPZETA_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Malformed {
                field: "format".into(),
                reason: format!("expected json or csv, got {s:?}"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub cap: u128,
    pub tolerance: f64,
    pub format: Format,
    /// 0 means the rayon default.
    pub workers: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cap: crate::mat2::DEFAULT_CAP,
            tolerance: 1e-12,
            format: Format::Json,
            workers: 0,
        }
    }
}

fn malformed(field: &str, reason: impl Into<String>) -> Error {
    Error::Malformed {
        field: field.into(),
        reason: reason.into(),
    }
}

fn parse_cap(v: &str) -> Result<u128> {
    let v = v.trim();
    let cap = if let Some(e) = v.strip_prefix("2^") {
        let e: u32 = e
            .parse()
            .map_err(|_| malformed("cap", format!("bad exponent {e:?}")))?;
        1u128
            .checked_shl(e)
            .filter(|_| e < 128)
            .ok_or_else(|| malformed("cap", "exponent too large"))?
    } else {
        v.parse()
            .map_err(|_| malformed("cap", format!("not a positive integer: {v:?}")))?
    };
    if cap == 0 {
        return Err(malformed("cap", "must be positive"));
    }
    Ok(cap)
}

impl Config {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "cap" => self.cap = parse_cap(value)?,
            "tolerance" => {
                let t: f64 = value
                    .parse()
                    .map_err(|_| malformed("tolerance", format!("not a number: {value:?}")))?;
                if !(t > 0.0 && t <= 1e-3) {
                    return Err(malformed("tolerance", "must lie in (0, 1e-3]"));
                }
                self.tolerance = t;
            }
            "format" => self.format = value.parse()?,
            "workers" => {
                self.workers = value
                    .parse()
                    .map_err(|_| malformed("workers", format!("not an integer: {value:?}")))?
            }
            other => return Err(malformed(other, "unknown configuration key")),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| malformed("config", format!("line {} is not key = value", n + 1)))?;
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    /// Applies the cap override from the environment, if set.
    pub fn with_env(mut self) -> Result<Config> {
        if let Ok(v) = std::env::var(CAP_ENV) {
            self.cap = parse_cap(&v)
                .map_err(|_| malformed(CAP_ENV, format!("not a positive integer: {v:?}")))?;
        }
        Ok(self)
    }

    /// Sizes the global rayon pool; has no effect once the pool exists.
    pub fn apply_workers(&self) -> Result<()> {
        if self.workers > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(self.workers)
                .build_global();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file() {
        let c = Config::parse("# comment\ncap = 2^20\ntolerance=1e-9\nformat = csv\nworkers = 4\n")
            .unwrap();
        assert_eq!(c.cap, 1 << 20);
        assert_eq!(c.tolerance, 1e-9);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.workers, 4);
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            "cap = 0",
            "tolerance = 0.1",
            "tolerance = 0",
            "format = xml",
            "colour = red",
            "cap",
        ] {
            assert!(Config::parse(text).is_err(), "{text}");
        }
        assert_eq!(Config::parse("").unwrap(), Config::default());
    }
}
