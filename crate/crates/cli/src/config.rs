use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

/// Defaults read from `--config`. Every field can be overridden by a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub out: Option<PathBuf>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub nmax: Option<usize>,
    pub xmax: Option<usize>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Config> {
        let Some(p) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))
    }
}
