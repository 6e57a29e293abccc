//! JSON manifest written next to every CSV output.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub path: PathBuf,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub verb: String,
    pub config: RunConfig,
    /// Values the run actually used after defaults were filled in.
    pub resolved: serde_json::Value,
    pub threads: usize,
    pub stages: Vec<StageTiming>,
    pub convergence: Vec<(String, bool)>,
    pub all_converged: bool,
    pub cache_hits: usize,
    pub seeds: Vec<u64>,
    pub outputs: Vec<OutputFile>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl RunManifest {
    pub fn new(verb: &str, config: &RunConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            verb: verb.to_owned(),
            config: config.clone(),
            resolved: serde_json::Value::Null,
            threads: rayon::current_num_threads(),
            stages: Vec::new(),
            convergence: Vec::new(),
            all_converged: true,
            cache_hits: 0,
            seeds: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Time `f` as a named stage.
    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let t0 = Instant::now();
        let out = f();
        self.stages.push(StageTiming {
            stage: name.to_owned(),
            seconds: t0.elapsed().as_secs_f64(),
        });
        out
    }

    pub fn flag(&mut self, label: impl Into<String>, ok: bool) {
        self.all_converged &= ok;
        self.convergence.push((label.into(), ok));
    }

    pub fn record_output(&mut self, path: &Path, bytes: &[u8]) {
        self.outputs.push(OutputFile {
            path: path.to_owned(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len(),
        });
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))?;
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Format(format!("manifest {}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_and_round_trip() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            alpha: Some(0.75),
            k: Some(2),
            ..Default::default()
        };
        let mut m = RunManifest::new("sweep", &cfg);
        m.flag("eps=1", true);
        m.flag("eps=0.5", false);
        m.record_output(Path::new("sweep.csv"), b"x\n");
        let p = dir.path().join("m.json");
        m.write(&p).unwrap();
        let back = RunManifest::read(&p).unwrap();
        assert_eq!(back, m);
        assert!(!back.all_converged);
        assert_eq!(RunConfig::load(&p).unwrap(), cfg);
    }
}
