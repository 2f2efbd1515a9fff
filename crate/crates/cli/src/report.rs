use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;

/// The JSON record every command leaves behind. Everything except
/// `timing_ms` is a function of the inputs.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub pass: bool,
    pub certificates: Value,
    pub files: Vec<String>,
    pub timing_ms: u128,
}

pub struct Recorder {
    command: String,
    inputs: BTreeMap<String, Value>,
    seed: Option<u64>,
    dir: PathBuf,
    files: Vec<String>,
    start: Instant,
}

impl Recorder {
    pub fn new(command: &str, dir: PathBuf) -> anyhow::Result<Recorder> {
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Recorder {
            command: command.into(),
            inputs: BTreeMap::new(),
            seed: None,
            dir,
            files: Vec::new(),
            start: Instant::now(),
        })
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.inputs.insert(key.into(), serde_json::to_value(v).expect("plain data"));
        self
    }

    pub fn seed(&mut self, s: u64) -> &mut Self {
        self.seed = Some(s);
        self
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write(&mut self, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
        let p = self.path(name);
        std::fs::write(&p, contents).with_context(|| format!("writing {}", p.display()))?;
        self.files.push(name.into());
        Ok(p)
    }

    pub fn write_json(&mut self, name: &str, v: &impl Serialize) -> anyhow::Result<PathBuf> {
        let mut s = serde_json::to_string_pretty(v)?;
        s.push('\n');
        self.write(name, &s)
    }

    /// Writes `report.json` and prints a one-line summary.
    pub fn finish(mut self, pass: bool, certificates: impl Serialize) -> anyhow::Result<bool> {
        let report = RunReport {
            command: self.command.clone(),
            inputs: std::mem::take(&mut self.inputs),
            seed: self.seed,
            pass,
            certificates: serde_json::to_value(certificates)?,
            files: std::mem::take(&mut self.files),
            timing_ms: self.start.elapsed().as_millis(),
        };
        let p = self.dir.join("report.json");
        let mut s = serde_json::to_string_pretty(&report)?;
        s.push('\n');
        std::fs::write(&p, s).with_context(|| format!("writing {}", p.display()))?;
        println!(
            "{} {}: {}",
            report.command,
            if pass { "pass" } else { "FAIL" },
            display(&p)
        );
        Ok(pass)
    }
}

pub fn display(p: &Path) -> String {
    p.display().to_string()
}
