//! Run manifests written next to command outputs as `<output>.manifest.json`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use ftrpca_core::{FilterVector, SolverConfig, SolverResult};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverRecord {
    pub lambda: f64,
    pub mu0: f64,
    pub rho: f64,
    pub mu_max: f64,
    pub eps: f64,
    pub max_iter: usize,
    /// Coefficients as JSON numbers, with `"inf"` for infinite entries.
    pub filter: Vec<Value>,
}

impl SolverRecord {
    pub fn new(cfg: &SolverConfig) -> Self {
        SolverRecord {
            lambda: cfg.lambda,
            mu0: cfg.mu0,
            rho: cfg.rho,
            mu_max: cfg.mu_max,
            eps: cfg.eps,
            max_iter: cfg.max_iter,
            filter: encode_filter(&cfg.alpha),
        }
    }
}

pub fn encode_filter(alpha: &FilterVector) -> Vec<Value> {
    alpha
        .coeffs()
        .iter()
        .map(|&a| if a.is_infinite() { Value::from("inf") } else { Value::from(a) })
        .collect()
}

pub fn decode_filter(values: &[Value]) -> Result<FilterVector> {
    let coeffs = values
        .iter()
        .map(|v| match v {
            Value::String(s) if s == "inf" => Ok(f64::INFINITY),
            Value::Number(n) => n.as_f64().ok_or_else(|| CliError::FilterSpec(v.to_string())),
            _ => Err(CliError::FilterSpec(v.to_string())),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FilterVector::new(coeffs)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveRecord {
    pub label: String,
    pub config: SolverRecord,
    pub iterations: usize,
    pub converged: bool,
    pub svd_calls: usize,
    pub seconds: f64,
}

impl SolveRecord {
    pub fn new(label: &str, cfg: &SolverConfig, result: &SolverResult, seconds: f64) -> Self {
        SolveRecord {
            label: label.to_owned(),
            config: SolverRecord::new(cfg),
            iterations: result.iterations,
            converged: result.converged,
            svd_calls: result.svd_calls,
            seconds,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Full argument vector, program name excluded.
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub solves: Vec<SolveRecord>,
    /// Input path to SHA-256 hex digest.
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    /// Wall-clock seconds by stage.
    pub timings: BTreeMap<String, f64>,
}

impl RunManifest {
    pub fn new(command: &str, args: Vec<String>) -> Self {
        RunManifest {
            command: command.to_owned(),
            args,
            ..Default::default()
        }
    }

    pub fn add_input(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.inputs.insert(path.display().to_string(), hash_path(path)?);
        Ok(())
    }

    pub fn add_output(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.outputs.insert(path.display().to_string(), hash_path(path)?);
        Ok(())
    }

    pub fn time(&mut self, stage: &str, seconds: f64) {
        self.timings.insert(stage.to_owned(), seconds);
    }

    /// Writes the manifest beside `primary_output` and returns its path.
    pub fn write_beside(&self, primary_output: impl AsRef<Path>) -> Result<PathBuf> {
        let path = manifest_path(primary_output.as_ref());
        let json = serde_json::to_string_pretty(self)?;
        fs::write(&path, json + "\n").map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest of a file, or of the sorted `name:digest` lines of a directory.
pub fn hash_path(path: &Path) -> Result<String> {
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| CliError::io(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        entries.sort();
        let mut listing = String::new();
        for entry in entries {
            let name = entry.file_name().unwrap_or_default().to_string_lossy().into_owned();
            listing.push_str(&format!("{name}:{}\n", hash_path(&entry)?));
        }
        return Ok(sha256_hex(listing.as_bytes()));
    }
    Ok(sha256_hex(&fs::read(path).map_err(|e| CliError::io(path, e))?))
}
