//! Flat `key=value` configuration merged under command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use posthopf_geomint::DerivMode;

use crate::error::CliError;

/// Keys a config file may set; same names as the long flags.
pub const KEYS: &[&str] = &[
    "max-grade",
    "order",
    "seed",
    "samples",
    "group",
    "field",
    "method",
    "t-min",
    "t-max",
    "t-points",
    "out",
    "derivatives",
    "tol",
    "horizon",
    "threads",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", n + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(CliError::Config(format!("line {}: unknown key `{key}`", n + 1)));
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::Config(format!("line {}: duplicate key `{key}`", n + 1)));
        }
    }
    Ok(map)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Everything a run depends on besides the subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct CliConfig {
    pub max_grade: usize,
    pub order: usize,
    pub seed: u64,
    pub samples: usize,
    pub group: String,
    pub field: String,
    pub method: String,
    pub t_min: f64,
    pub t_max: f64,
    pub t_points: usize,
    pub out: Option<PathBuf>,
    pub derivatives: DerivMode,
    pub tol: f64,
    pub horizon: f64,
    pub threads: Option<usize>,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            max_grade: 3,
            order: 4,
            seed: 0,
            samples: 200,
            group: "so3".into(),
            field: "divfree".into(),
            method: "lie-euler".into(),
            t_min: 1e-3,
            t_max: 1e-1,
            t_points: 8,
            out: None,
            derivatives: DerivMode::Analytic,
            tol: posthopf_geomint::stepper::DEFAULT_TOL,
            horizon: 0.5,
            threads: None,
        }
    }
}

fn parsed<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("invalid value `{value}` for `{key}`")))
}

impl CliConfig {
    /// Defaults, overridden by the file, overridden by flags.
    pub fn resolve(file: &BTreeMap<String, String>, flags: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let mut merged = file.clone();
        merged.extend(flags.iter().map(|(k, v)| (k.clone(), v.clone())));
        let mut cfg = CliConfig::default();
        for (key, value) in &merged {
            match key.as_str() {
                "max-grade" => cfg.max_grade = parsed(key, value)?,
                "order" => cfg.order = parsed(key, value)?,
                "seed" => cfg.seed = parsed(key, value)?,
                "samples" => cfg.samples = parsed(key, value)?,
                "group" => cfg.group = value.clone(),
                "field" => cfg.field = value.clone(),
                "method" => cfg.method = value.clone(),
                "t-min" => cfg.t_min = parsed(key, value)?,
                "t-max" => cfg.t_max = parsed(key, value)?,
                "t-points" => cfg.t_points = parsed(key, value)?,
                "out" => cfg.out = Some(PathBuf::from(value)),
                "derivatives" => {
                    cfg.derivatives = value.parse().map_err(|e: posthopf_geomint::GeomError| CliError::Config(e.to_string()))?
                }
                "tol" => cfg.tol = parsed(key, value)?,
                "horizon" => cfg.horizon = parsed(key, value)?,
                "threads" => {
                    let n: usize = parsed(key, value)?;
                    if n == 0 {
                        return Err(CliError::Config("threads must be at least 1".into()));
                    }
                    cfg.threads = Some(n);
                }
                other => return Err(CliError::Config(format!("unknown key `{other}`"))),
            }
        }
        Ok(cfg)
    }
}
