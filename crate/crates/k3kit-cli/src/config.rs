//! Run configuration: command line flags layered over an optional JSON
//! config file layered over defaults.
//!
//! The config file is a single JSON document with a mandatory version tag:
//!
//! ```json
//! {
//!   "schema": "k3kit.config.v1",
//!   "format": "json",
//!   "precision_bits": 128,
//!   "search_bound": 6,
//!   "jobs": 4,
//!   "no_timestamp": true
//! }
//! ```
//!
//! Every field except `schema` is optional; unknown fields are rejected so
//! typos fail loudly. The file is looked up from `--config` first and the
//! `K3KIT_CONFIG` environment variable second; if neither is set no file
//! is read.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Deserialize;

use crate::CliError;

pub const CONFIG_SCHEMA: &str = "k3kit.config.v1";
pub const CONFIG_ENV: &str = "K3KIT_CONFIG";
pub const MIN_SEARCH_BOUND: u32 = 5;
pub const DEFAULT_SEARCH_BOUND: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Format::Json => write!(f, "json"),
            Format::Csv => write!(f, "csv"),
            Format::Markdown => write!(f, "markdown"),
        }
    }
}

/// Raw shape of the config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    schema: Option<String>,
    format: Option<Format>,
    precision_bits: Option<usize>,
    search_bound: Option<u32>,
    jobs: Option<usize>,
    no_timestamp: Option<bool>,
}

impl FileConfig {
    fn parse(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: FileConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        match cfg.schema.as_deref() {
            Some(CONFIG_SCHEMA) => Ok(cfg),
            Some(other) => Err(CliError::Usage(format!(
                "config {}: unsupported schema {other:?}, expected {CONFIG_SCHEMA:?}",
                path.display()
            ))),
            None => Err(CliError::Usage(format!(
                "config {}: missing \"schema\" field (expected {CONFIG_SCHEMA:?})",
                path.display()
            ))),
        }
    }
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub format: Format,
    pub precision_bits: usize,
    pub search_bound: u32,
    pub jobs: Option<usize>,
    /// Unix seconds to stamp reports with; `None` suppresses the stamp.
    pub timestamp: Option<u64>,
}

/// The command line flags that participate in config resolution.
#[derive(Clone, Debug, Default)]
pub struct FlagOverrides {
    pub format: Option<Format>,
    pub precision_bits: Option<usize>,
    pub search_bound: Option<u32>,
    pub jobs: Option<usize>,
    pub no_timestamp: bool,
    pub config: Option<PathBuf>,
}

impl RunConfig {
    /// Resolves flags over file over defaults and validates the result.
    pub fn resolve(flags: &FlagOverrides) -> Result<Self, CliError> {
        let file = match flags
            .config
            .clone()
            .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from))
        {
            Some(path) => FileConfig::parse(&path)?,
            None => FileConfig::default(),
        };

        let precision_bits = flags
            .precision_bits
            .or(file.precision_bits)
            .unwrap_or(k3kit::arith::DEFAULT_PRECISION_BITS);
        if precision_bits < k3kit::arith::MIN_PRECISION_BITS {
            return Err(CliError::Usage(format!(
                "--precision-bits {precision_bits} is below the minimum of {}",
                k3kit::arith::MIN_PRECISION_BITS
            )));
        }

        let search_bound = flags
            .search_bound
            .or(file.search_bound)
            .unwrap_or(DEFAULT_SEARCH_BOUND);
        if search_bound < MIN_SEARCH_BOUND {
            return Err(CliError::Usage(format!(
                "--search-bound {search_bound} is below the minimum of \
                 {MIN_SEARCH_BOUND} (smaller bounds miss reference classes)"
            )));
        }

        let jobs = flags.jobs.or(file.jobs);
        if jobs == Some(0) {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }

        let no_timestamp = flags.no_timestamp || file.no_timestamp.unwrap_or(false);
        let timestamp = if no_timestamp {
            None
        } else {
            Some(
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
            )
        };

        Ok(RunConfig {
            format: flags.format.or(file.format).unwrap_or(Format::Markdown),
            precision_bits,
            search_bound,
            jobs,
            timestamp,
        })
    }
}
