//! Experiment configuration: flat `key = value` text or JSON, with command
//! line flags applied on top as the same key/value pairs.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ensemble::{check_feasible, DEFAULT_CHAINS};
use crate::error::{Error, Result};
use crate::graphs::CanonicalShape;

pub const THREADS_ENV: &str = "REGFACTOR_THREADS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Enumerate,
    Sample,
    Factors,
    Reduce,
    #[default]
    VarianceReport,
    TraceStats,
    Proofcheck,
    VerifyIdentities,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Enumerate,
        Command::Sample,
        Command::Factors,
        Command::Reduce,
        Command::VarianceReport,
        Command::TraceStats,
        Command::Proofcheck,
        Command::VerifyIdentities,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Enumerate => "enumerate",
            Command::Sample => "sample",
            Command::Factors => "factors",
            Command::Reduce => "reduce",
            Command::VarianceReport => "variance-report",
            Command::TraceStats => "trace-stats",
            Command::Proofcheck => "proofcheck",
            Command::VerifyIdentities => "verify-identities",
        }
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .iter()
            .find(|c| c.name() == s)
            .copied()
            .ok_or_else(|| Error::Config(format!("unknown subcommand {s:?}")))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How `d` follows from `n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DRule {
    /// Use the configured `d` as is.
    Fixed,
    /// `d = n/2`, moved down by one when `dn` is odd.
    #[default]
    Half,
    /// `d = ceil(n / ln n)`, moved by one when `dn` is odd.
    NOverLog,
}

impl FromStr for DRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(DRule::Fixed),
            "half" => Ok(DRule::Half),
            "n-over-log" => Ok(DRule::NOverLog),
            _ => Err(Error::Config(format!("unknown d rule {s:?} (fixed, half, n-over-log)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("unknown format {s:?} (csv, json)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    pub n_list: Vec<usize>,
    pub d: Option<usize>,
    pub d_rule: DRule,
    pub shapes: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub chains: usize,
    pub burn_in: Option<u64>,
    pub thin: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub graph: Option<PathBuf>,
    pub lemma: String,
    pub trials: usize,
    pub max_length: usize,
    pub expand: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            command: Command::default(),
            n_list: Vec::new(),
            d: None,
            d_rule: DRule::default(),
            shapes: Vec::new(),
            samples: 1000,
            seed: 0,
            threads: None,
            chains: DEFAULT_CHAINS,
            burn_in: None,
            thin: None,
            out: None,
            format: OutputFormat::default(),
            graph: None,
            lemma: "all".into(),
            trials: 10_000,
            max_length: 5,
            expand: false,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<usize>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_num(key, t))
        .collect()
}

/// Split a shape list. Entries are separated by `;`, or by `,` when no entry
/// is an edge list.
pub fn split_shape_list(value: &str) -> Vec<String> {
    let parts: Vec<&str> = if value.contains(';') {
        value.split(';').collect()
    } else if value.contains('-') {
        vec![value]
    } else {
        value.split(',').collect()
    };
    parts
        .into_iter()
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            ..Default::default()
        }
    }

    /// Set one field from text. Keys use `-` or `_` interchangeably.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        match key.as_str() {
            "command" | "subcommand" => self.command = value.parse()?,
            "n" | "n-list" => self.n_list = parse_list(&key, value)?,
            "d" => {
                self.d = Some(parse_num(&key, value)?);
                self.d_rule = DRule::Fixed;
            }
            "d-rule" => self.d_rule = value.parse()?,
            "shape" | "shapes" => self.shapes = split_shape_list(value),
            "samples" | "count" => self.samples = parse_num(&key, value)?,
            "seed" => self.seed = parse_num(&key, value)?,
            "threads" => self.threads = Some(parse_num(&key, value)?),
            "chains" => self.chains = parse_num(&key, value)?,
            "burn-in" => self.burn_in = Some(parse_num(&key, value)?),
            "thin" => self.thin = Some(parse_num(&key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            "graph" => self.graph = Some(PathBuf::from(value)),
            "lemma" => self.lemma = value.to_string(),
            "trials" => self.trials = parse_num(&key, value)?,
            "max-length" => self.max_length = parse_num(&key, value)?,
            "expand" => self.expand = parse_num(&key, value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// `key = value` lines; `#` starts a comment.
    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (i, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            cfg.apply(k, v)?;
        }
        Ok(cfg)
    }

    pub fn from_json_text(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("JSON config: {e}")))
    }

    /// JSON when the first non-blank character is `{`, key/value otherwise.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        if text.trim_start().starts_with('{') {
            Self::from_json_text(&text)
        } else {
            Self::from_kv_text(&text)
        }
    }

    /// `REGFACTOR_THREADS` wins over the configured count.
    pub fn effective_threads(&self) -> Result<Option<usize>> {
        match std::env::var(THREADS_ENV) {
            Ok(v) if !v.trim().is_empty() => {
                let t: usize = parse_num(THREADS_ENV, &v)?;
                Ok(Some(t))
            }
            _ => Ok(self.threads),
        }
    }

    pub fn parsed_shapes(&self) -> Result<Vec<CanonicalShape>> {
        self.shapes.iter().map(|s| s.parse()).collect()
    }

    /// `(n, d)` pairs after applying the d rule; parity fixes are logged.
    pub fn ensemble_pairs(&self) -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::with_capacity(self.n_list.len());
        for &n in &self.n_list {
            let d = match self.d_rule {
                DRule::Fixed => self
                    .d
                    .ok_or_else(|| Error::Config("d rule `fixed` needs --d".into()))?,
                DRule::Half => {
                    let d = n / 2;
                    if d * n % 2 == 1 {
                        log::warn!("n={n}: d={d} has odd dn, using d={}", d - 1);
                        d - 1
                    } else {
                        d
                    }
                }
                DRule::NOverLog => {
                    if n < 3 {
                        return Err(Error::Config(format!("n-over-log needs n >= 3, got {n}")));
                    }
                    let d = ((n as f64) / (n as f64).ln()).ceil() as usize;
                    if d * n % 2 == 1 {
                        let fixed = if d + 1 < n { d + 1 } else { d - 1 };
                        log::warn!("n={n}: d={d} has odd dn, using d={fixed}");
                        fixed
                    } else {
                        d
                    }
                }
            };
            check_feasible(n, d).map_err(|e| Error::Config(e.to_string()))?;
            out.push((n, d));
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        let needs_ensemble = matches!(
            self.command,
            Command::Enumerate | Command::Sample | Command::VarianceReport | Command::TraceStats
        );
        if needs_ensemble && self.n_list.is_empty() {
            return Err(Error::Config(format!("{} needs --n or --n-list", self.command)));
        }
        if needs_ensemble {
            self.ensemble_pairs()?;
        }
        if matches!(self.command, Command::Reduce | Command::VarianceReport) && self.shapes.len() != 1 {
            return Err(Error::Config(format!("{} needs exactly one --shape", self.command)));
        }
        if matches!(self.command, Command::Factors) && self.graph.is_none() {
            return Err(Error::Config("factors needs --graph FILE".into()));
        }
        if self.command == Command::TraceStats && !(3..=crate::factors::MAX_WALK_LENGTH).contains(&self.max_length) {
            return Err(Error::Config(format!(
                "max-length must be between 3 and {}",
                crate::factors::MAX_WALK_LENGTH
            )));
        }
        if self.chains == 0 {
            return Err(Error::Config("chains must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        if self.command == Command::Proofcheck {
            crate::proofcheck::parse_lemma_list(&self.lemma).map_err(|e| Error::Config(e.to_string()))?;
        }
        self.parsed_shapes().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }
}
