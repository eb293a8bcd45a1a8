//! Input loading and artifact writing.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use adversary_core::sdp::AdmmConfig;
use adversary_core::{BooleanFunction, VectorSet};

use crate::{InputArgs, SolverArgs, UsageError};

pub enum Loaded {
    Function(BooleanFunction),
    Vectors(VectorSet),
}

#[derive(Serialize, Clone, Debug)]
pub struct RandomSpec {
    pub n: usize,
    pub domain_size: usize,
    pub seed: u64,
}

/// Everything needed to reproduce an artifact. The output directory is left
/// out so that identical runs write identical bytes wherever they land.
#[derive(Serialize, Clone, Debug)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomSpec>,
    pub seed: u64,
    pub solver: AdmmConfig,
    #[serde(flatten)]
    pub extra: serde_json::Map<String, Value>,
}

impl RunConfig {
    pub fn new(subcommand: &'static str, input: &InputArgs, solver: &SolverArgs) -> Result<Self> {
        let random = match input.random {
            Some((n, domain_size)) => {
                let seed = input
                    .seed
                    .ok_or_else(|| UsageError("--random requires --seed".into()))?;
                Some(RandomSpec { n, domain_size, seed })
            }
            None => None,
        };
        if input.input.is_none() && random.is_none() {
            return Err(UsageError("one of --input or --random is required".into()).into());
        }
        let solver = admm_config(solver.iters, solver.feas_tol, solver.round_tol, solver.mu)?;
        Ok(RunConfig {
            subcommand,
            version: env!("CARGO_PKG_VERSION"),
            input: input.input.clone(),
            random,
            seed: input.seed.unwrap_or(0),
            solver,
            extra: serde_json::Map::new(),
        })
    }

    pub fn bare(subcommand: &'static str, seed: u64, solver: AdmmConfig) -> Self {
        RunConfig {
            subcommand,
            version: env!("CARGO_PKG_VERSION"),
            input: None,
            random: None,
            seed,
            solver,
            extra: serde_json::Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.extra.insert(key.to_string(), serde_json::to_value(value).expect("config serializes"));
        self
    }

    /// One-line `#`-prefixed header for CSV artifacts.
    pub fn csv_header(&self) -> String {
        format!("# {}\n", serde_json::to_string(self).expect("config serializes"))
    }
}

pub fn admm_config(iters: usize, feas_tol: f64, round_tol: f64, mu: f64) -> Result<AdmmConfig> {
    let cfg = AdmmConfig { max_iters: iters, feas_tol, round_tol, mu, ..AdmmConfig::default() };
    cfg.validate().map_err(|e| UsageError(e.to_string()))?;
    Ok(cfg)
}

pub fn load(cfg: &RunConfig) -> Result<Loaded> {
    if let Some(r) = &cfg.random {
        return Ok(Loaded::Function(BooleanFunction::random(r.n, r.domain_size, r.seed)?));
    }
    let path = cfg.input.as_ref().expect("validated in RunConfig::new");
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_input(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Accepts a truth table in line format, a function as JSON, a bare vector
/// set, or any artifact carrying a `vector_set` field.
pub fn parse_input(text: &str) -> Result<Loaded> {
    if !text.trim_start().starts_with('{') {
        return Ok(Loaded::Function(BooleanFunction::parse(text)?));
    }
    let value: Value = serde_json::from_str(text)?;
    if let Some(set) = value.get("vector_set") {
        return Ok(Loaded::Vectors(serde_json::from_value(set.clone())?));
    }
    if value.get("dimension").is_some() {
        return Ok(Loaded::Vectors(serde_json::from_value(value)?));
    }
    if value.get("domain").is_some() {
        return Ok(Loaded::Function(serde_json::from_value(value)?));
    }
    Err(UsageError("JSON input is neither a Boolean function nor a vector set".into()).into())
}

#[derive(Serialize)]
struct Artifact<'a, P: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    payload: P,
}

pub fn write_json(dir: &Path, name: &str, cfg: &RunConfig, payload: impl Serialize) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(&Artifact { config: cfg, payload })?;
    text.push('\n');
    write(&path, &text)?;
    Ok(path)
}

pub fn write_csv(dir: &Path, name: &str, cfg: &RunConfig, body: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    write(&path, &(cfg.csv_header() + body))?;
    Ok(path)
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_input_kinds() {
        assert!(matches!(parse_input("0 0\n1 1\n").unwrap(), Loaded::Function(_)));
        let f = BooleanFunction::identity();
        let json = serde_json::to_string(&f).unwrap();
        assert!(matches!(parse_input(&json).unwrap(), Loaded::Function(_)));
        let vs = VectorSet::from_fn(f, 1, |x, _| nalgebra::DVector::from_element(1, x as f64)).unwrap();
        let bare = serde_json::to_string(&vs).unwrap();
        assert!(matches!(parse_input(&bare).unwrap(), Loaded::Vectors(_)));
        let wrapped = format!("{{\"config\": {{}}, \"vector_set\": {bare}}}");
        assert!(matches!(parse_input(&wrapped).unwrap(), Loaded::Vectors(_)));
        assert!(parse_input("{\"other\": 1}").is_err());
    }
}
