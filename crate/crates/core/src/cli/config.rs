use std::path::Path;

use super::Format;
use crate::census::{DEFAULT_EXHAUSTIVE_CAP, VERIFY_COUNT_CAP};
use crate::error::{Error, Result};
use crate::gf::DEFAULT_ENUM_CAP;
use crate::zeta::DEFAULT_COUNT_CAP;

/// Defaults read from a `key = value` file. Blank lines and `#` comments are
/// ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub enum_cap: u128,
    pub count_cap: u128,
    pub verify_cap: u128,
    pub genus_cap: usize,
    pub exhaustive_cap: u64,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub threads: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            enum_cap: DEFAULT_ENUM_CAP,
            count_cap: DEFAULT_COUNT_CAP,
            verify_cap: VERIFY_COUNT_CAP,
            genus_cap: crate::cartier::GENUS_CAP,
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            format: None,
            seed: None,
            samples: None,
            threads: None,
        }
    }
}

fn positive<T: std::str::FromStr + PartialOrd + Default>(key: &str, v: &str) -> Result<T> {
    let n: T = v.parse().map_err(|_| Error::Parse(format!("bad value for {key}: {v:?}")))?;
    if n <= T::default() {
        return Err(Error::Parse(format!("{key} must be positive")));
    }
    Ok(n)
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config> {
        let mut c = Config::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "enum_cap" => c.enum_cap = positive(key, value)?,
                "count_cap" => c.count_cap = positive(key, value)?,
                "verify_cap" => c.verify_cap = positive(key, value)?,
                "genus_cap" => {
                    c.genus_cap = positive(key, value)?;
                    if c.genus_cap > crate::cartier::GENUS_CAP {
                        return Err(Error::Parse(format!("genus_cap above {}", crate::cartier::GENUS_CAP)));
                    }
                }
                "exhaustive_cap" => c.exhaustive_cap = positive(key, value)?,
                "samples" => c.samples = Some(positive(key, value)?),
                "threads" => c.threads = Some(positive(key, value)?),
                "seed" => c.seed = Some(value.parse().map_err(|_| Error::Parse(format!("bad seed {value:?}")))?),
                "format" => {
                    c.format = Some(match value {
                        "pretty" => Format::Pretty,
                        "json" => Format::Json,
                        "csv" => Format::Csv,
                        _ => return Err(Error::Parse(format!("unknown format {value:?}"))),
                    })
                }
                _ => return Err(Error::Parse(format!("line {}: unknown key {key:?}", n + 1))),
            }
        }
        Ok(c)
    }
}
