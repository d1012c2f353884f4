//! Run manifests: the config, seed, input checksums and counters of one
//! command invocation, written as `key=value` lines next to its outputs.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifestError {
    #[error("line {line}: expected key=value")]
    Syntax { line: usize },
    #[error("line {line}: bad value for {key}")]
    Value { line: usize, key: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub config: Vec<(String, String)>,
    pub seed: Option<u64>,
    /// `(name, hex sha256)` of every input file.
    pub inputs: Vec<(String, String)>,
    pub counters: Vec<(String, u64)>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        write!(out, "{b:02x}").unwrap();
    }
    out
}

impl RunManifest {
    pub fn new(command: impl Into<String>) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn add_input(&mut self, name: impl Into<String>, bytes: &[u8]) {
        self.inputs.push((name.into(), sha256_hex(bytes)));
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "tool_version={}", self.tool_version).unwrap();
        writeln!(out, "command={}", self.command).unwrap();
        if let Some(seed) = self.seed {
            writeln!(out, "seed={seed}").unwrap();
        }
        for (k, v) in &self.config {
            writeln!(out, "config.{k}={v}").unwrap();
        }
        for (k, v) in &self.inputs {
            writeln!(out, "input.{k}={v}").unwrap();
        }
        for (k, v) in &self.counters {
            writeln!(out, "counter.{k}={v}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ManifestError> {
        let mut m = RunManifest::default();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ManifestError::Syntax { line: line_no })?;
            let bad = || ManifestError::Value {
                line: line_no,
                key: key.to_owned(),
            };
            match key {
                "tool_version" => m.tool_version = value.to_owned(),
                "command" => m.command = value.to_owned(),
                "seed" => m.seed = Some(value.parse().map_err(|_| bad())?),
                _ => {
                    if let Some(k) = key.strip_prefix("config.") {
                        m.config.push((k.to_owned(), value.to_owned()));
                    } else if let Some(k) = key.strip_prefix("input.") {
                        m.inputs.push((k.to_owned(), value.to_owned()));
                    } else if let Some(k) = key.strip_prefix("counter.") {
                        m.counters.push((k.to_owned(), value.parse().map_err(|_| bad())?));
                    } else {
                        return Err(bad());
                    }
                }
            }
        }
        Ok(m)
    }
}
