//! Flat `key = value` configuration with dotted keys.
//!
//! ```text
//! # comment
//! input = data.csv
//! output_column = Y
//! degree = 3
//! families = full, order
//! groups = X1,X2; X3,X4
//! ortho.drop_tolerance = 1e-10
//! ```
//!
//! Every key is also accepted as a `--key` command-line flag; flags are
//! applied after the file and therefore win.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use gsa_pce_core::indices::{AnalysisOptions, Denominator, Family};
use gsa_pce_core::ortho::OrthoOptions;
use gsa_pce_core::stats::ResamplingPlan;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: key '{key}' is set twice")]
    Duplicate { line: usize, key: String },
    #[error("unknown key '{0}'")]
    UnknownKey(String),
    #[error("key '{key}': {message}")]
    Value { key: String, message: String },
    #[error("missing required key '{0}'")]
    Missing(&'static str),
}

/// Every recognized key, in the order they are echoed in reports.
pub const KEYS: [&str; 17] = [
    "input",
    "output_column",
    "input_columns",
    "degree",
    "families",
    "groups",
    "denominator",
    "ortho.reorthogonalize",
    "ortho.drop_dependent",
    "ortho.drop_tolerance",
    "resampling.bootstrap_samples",
    "resampling.ci_level",
    "resampling.max_retries",
    "resampling.reuse_basis",
    "seed",
    "out",
    "screen.threshold",
];

/// Splits configuration text into `(line, key, value)` triples. Keys must be
/// made of `[A-Za-z0-9_.]`; values are trimmed and may be empty.
pub fn parse_config_text(text: &str) -> Result<Vec<(usize, String, String)>, ConfigError> {
    let mut out: Vec<(usize, String, String)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            message: format!("expected 'key = value', found '{content}'"),
        })?;
        let key = key.trim();
        if key.is_empty()
            || !key
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
        {
            return Err(ConfigError::Syntax {
                line,
                message: format!("invalid key '{key}'"),
            });
        }
        if out.iter().any(|(_, k, _)| k == key) {
            return Err(ConfigError::Duplicate {
                line,
                key: key.to_string(),
            });
        }
        out.push((line, key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub input: Option<PathBuf>,
    pub output_column: Option<String>,
    pub input_columns: Option<Vec<String>>,
    pub degree: u32,
    pub families: BTreeSet<Family>,
    pub groups: Vec<Vec<String>>,
    pub denominator: Denominator,
    pub ortho: OrthoOptions,
    pub resampling: Option<ResamplingPlan>,
    pub reuse_basis: bool,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub screen_threshold: f64,
    /// Raw values as given, for echoing into reports.
    pub echo: BTreeMap<String, String>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            input: None,
            output_column: None,
            input_columns: None,
            degree: 2,
            families: [Family::Full, Family::Uncorrelated].into_iter().collect(),
            groups: Vec::new(),
            denominator: Denominator::Sample,
            ortho: OrthoOptions::default(),
            resampling: None,
            reuse_basis: false,
            seed: 42,
            out: None,
            screen_threshold: 0.99,
            echo: BTreeMap::new(),
        }
    }
}

fn value_err(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Value {
        key: key.to_string(),
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse()
        .map_err(|_| value_err(key, format!("cannot parse '{v}'")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(value_err(
            key,
            format!("expected true or false, found '{v}'"),
        )),
    }
}

fn parse_list(v: &str) -> Vec<String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

/// `"X1,X2; X3,X4"` into named groups.
pub fn parse_groups(v: &str) -> Vec<Vec<String>> {
    v.split(';')
        .map(parse_list)
        .filter(|g| !g.is_empty())
        .collect()
}

pub fn parse_families(key: &str, v: &str) -> Result<BTreeSet<Family>, ConfigError> {
    parse_list(v)
        .iter()
        .map(|f| {
            Family::parse(f).ok_or_else(|| {
                value_err(
                    key,
                    format!("unknown family '{f}' (expected full, uncorrelated, conditional, order, groups)"),
                )
            })
        })
        .collect()
}

pub fn parse_denominator(key: &str, v: &str) -> Result<Denominator, ConfigError> {
    match v {
        "sample" => Ok(Denominator::Sample),
        "pce" => Ok(Denominator::Pce),
        _ => Err(value_err(
            key,
            format!("expected sample or pce, found '{v}'"),
        )),
    }
}

impl AnalysisConfig {
    fn plan_mut(&mut self) -> &mut ResamplingPlan {
        let seed = self.seed;
        self.resampling.get_or_insert_with(|| ResamplingPlan {
            seed,
            ..ResamplingPlan::default()
        })
    }

    /// Applies one key. Later calls override earlier ones.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "input" => self.input = Some(PathBuf::from(value)),
            "output_column" => {
                if value.is_empty() {
                    return Err(value_err(key, "must not be empty"));
                }
                self.output_column = Some(value.to_string())
            }
            "input_columns" => {
                let cols = parse_list(value);
                let distinct: BTreeSet<&String> = cols.iter().collect();
                if distinct.len() != cols.len() {
                    return Err(value_err(key, "columns must be distinct"));
                }
                if cols.is_empty() {
                    return Err(value_err(key, "at least one column is required"));
                }
                self.input_columns = Some(cols)
            }
            "degree" => {
                let d: u32 = parse_num(key, value)?;
                if d == 0 {
                    return Err(value_err(key, "degree must be at least 1"));
                }
                self.degree = d
            }
            "families" => self.families = parse_families(key, value)?,
            "groups" => {
                let groups = parse_groups(value);
                let mut seen = BTreeSet::new();
                for name in groups.iter().flatten() {
                    if !seen.insert(name) {
                        return Err(value_err(
                            key,
                            format!("'{name}' appears in more than one group"),
                        ));
                    }
                }
                self.groups = groups
            }
            "denominator" => self.denominator = parse_denominator(key, value)?,
            "ortho.reorthogonalize" => self.ortho.reorthogonalize = parse_bool(key, value)?,
            "ortho.drop_dependent" => self.ortho.drop_dependent = parse_bool(key, value)?,
            "ortho.drop_tolerance" => {
                let t: f64 = parse_num(key, value)?;
                if !(t.is_finite() && t >= 0.0) {
                    return Err(value_err(key, "must be a non-negative number"));
                }
                self.ortho.drop_tolerance = t
            }
            "resampling.bootstrap_samples" => {
                let b: usize = parse_num(key, value)?;
                if b == 0 {
                    return Err(value_err(key, "must be positive"));
                }
                self.plan_mut().bootstrap_samples = b
            }
            "resampling.ci_level" => {
                let l: f64 = parse_num(key, value)?;
                if !(l > 0.0 && l < 1.0) {
                    return Err(value_err(key, "must lie strictly between 0 and 1"));
                }
                self.plan_mut().ci_level = l
            }
            "resampling.max_retries" => self.plan_mut().max_retries = parse_num(key, value)?,
            "resampling.reuse_basis" => self.reuse_basis = parse_bool(key, value)?,
            "seed" => {
                self.seed = parse_num(key, value)?;
                let seed = self.seed;
                if let Some(plan) = &mut self.resampling {
                    plan.seed = seed;
                }
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "screen.threshold" => {
                let t: f64 = parse_num(key, value)?;
                if !(t > 0.0 && t <= 1.0) {
                    return Err(value_err(key, "must lie in (0, 1]"));
                }
                self.screen_threshold = t
            }
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        self.echo.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Builds a configuration from file text followed by flag overrides.
    pub fn from_sources(
        file_text: Option<&str>,
        flags: &[(String, String)],
    ) -> Result<Self, ConfigError> {
        let mut cfg = AnalysisConfig::default();
        if let Some(text) = file_text {
            for (line, key, value) in parse_config_text(text)? {
                cfg.set(&key, &value).map_err(|e| match e {
                    ConfigError::Value { key, message } => ConfigError::Syntax {
                        line,
                        message: format!("key '{key}': {message}"),
                    },
                    ConfigError::UnknownKey(k) => ConfigError::Syntax {
                        line,
                        message: format!("unknown key '{k}'"),
                    },
                    other => other,
                })?;
            }
        }
        for (key, value) in flags {
            cfg.set(key, value)?;
        }
        // The seed may have been given after a resampling key.
        let seed = cfg.seed;
        if let Some(plan) = &mut cfg.resampling {
            plan.seed = seed;
        }
        Ok(cfg)
    }

    pub fn analysis_options(&self) -> AnalysisOptions {
        AnalysisOptions {
            degree: self.degree,
            ortho: self.ortho,
            denominator: self.denominator,
        }
    }

    pub fn require_input(&self) -> Result<(&PathBuf, &str), ConfigError> {
        let input = self.input.as_ref().ok_or(ConfigError::Missing("input"))?;
        let out = self
            .output_column
            .as_deref()
            .ok_or(ConfigError::Missing("output_column"))?;
        Ok((input, out))
    }
}
