use std::fmt;
use std::fs;
use std::path::Path;

use phinlab::phin::{build_module, ModuleSpec};
use phinlab::{FilteredPhiNModule, Rational, Subspace};

/// Why a run stopped before producing a verdict. `Input` maps to exit
/// code 2, `Math` to 1.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Math(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Math(m) => f.write_str(m),
        }
    }
}

impl From<phinlab::Error> for CliError {
    fn from(e: phinlab::Error) -> Self {
        CliError::Math(e.to_string())
    }
}

pub fn max_n() -> Result<usize, CliError> {
    match std::env::var("PHINLAB_MAX_N") {
        Err(_) => Ok(8),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("PHINLAB_MAX_N={v:?} is not a nonnegative integer"))),
    }
}

pub fn check_size(n: usize) -> Result<(), CliError> {
    let cap = max_n()?;
    if n > cap {
        return Err(CliError::Input(format!("rank {n} exceeds PHINLAB_MAX_N = {cap}")));
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Parse JSON text into `T`, reporting syntax errors by position and schema
/// errors by field path.
pub fn parse<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_syntax() || inner.is_eof() {
            CliError::Input(format!(
                "malformed {what} JSON at line {} column {}: {inner}",
                inner.line(),
                inner.column()
            ))
        } else {
            CliError::Input(format!("invalid {what} at `{path}`: {inner}"))
        }
    })
}

pub fn load_module(path: &Path) -> Result<FilteredPhiNModule, CliError> {
    let spec: ModuleSpec = parse(&read(path)?, "module")?;
    check_size(spec.n)?;
    let problems = spec.violations();
    if !problems.is_empty() {
        let list: Vec<String> = problems.iter().map(|e| format!("  - {e}")).collect();
        return Err(CliError::Input(format!("invalid module:\n{}", list.join("\n"))));
    }
    build_module(spec).map_err(|e| CliError::Input(e.to_string()))
}

/// A JSON list of subspaces, each a list of spanning vectors.
pub fn load_candidates(path: &Path, ambient: usize) -> Result<Vec<Subspace>, CliError> {
    let raw: Vec<Vec<Vec<Rational>>> = parse(&read(path)?, "candidate list")?;
    raw.iter()
        .enumerate()
        .map(|(i, vs)| {
            if let Some(v) = vs.iter().find(|v| v.len() != ambient) {
                return Err(CliError::Input(format!(
                    "invalid candidate list at `[{i}]`: vector of length {} in a rank {ambient} module",
                    v.len()
                )));
            }
            Subspace::span(ambient, vs).map_err(|e| CliError::Input(e.to_string()))
        })
        .collect()
}
