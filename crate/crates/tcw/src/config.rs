//! Run configuration: defaults, an optional TOML file named by `TCW_CONFIG`, and
//! `--caps` overrides.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use tcw_core::analysis::ClosureConfig;
use tcw_core::function::DEFAULT_TABLE_ARITY_CAP;
use tcw_core::SynthConfig;

pub const CONFIG_ENV: &str = "TCW_CONFIG";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Largest arity for explicit tables and closure searches.
    pub table_arity_cap: usize,
    /// Largest arity whose witnesses are checked on all 3ⁿ points.
    pub witness_table_cap: usize,
    pub bfs_node_budget: u64,
    pub bfs_depth_cap: usize,
    /// Candidate identifications tried per generator before giving up.
    pub search_budget: u64,
    pub report_format: ReportFormat,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            table_arity_cap: 7,
            witness_table_cap: 12,
            bfs_node_budget: 1_000_000,
            bfs_depth_cap: 4,
            search_budget: 1_000_000,
            report_format: ReportFormat::Text,
            seed: 0,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Config = toml::from_str(text).context("invalid config")?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Defaults, or the file named by `TCW_CONFIG` when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) if !path.is_empty() => Self::from_file(Path::new(&path)),
            _ => Ok(Config::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("table_arity_cap", self.table_arity_cap as u64),
            ("witness_table_cap", self.witness_table_cap as u64),
            ("bfs_node_budget", self.bfs_node_budget),
            ("bfs_depth_cap", self.bfs_depth_cap as u64),
            ("search_budget", self.search_budget),
        ] {
            if value == 0 {
                bail!("{name} must be positive");
            }
        }
        for (name, value) in [("table_arity_cap", self.table_arity_cap), ("witness_table_cap", self.witness_table_cap)] {
            if value > DEFAULT_TABLE_ARITY_CAP {
                bail!("{name} must be at most {DEFAULT_TABLE_ARITY_CAP}, got {value}");
            }
        }
        Ok(())
    }

    /// Applies `key=value,key=value` overrides to the numeric caps.
    pub fn apply_caps(&mut self, overrides: &str) -> Result<()> {
        for item in overrides.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item.split_once('=').with_context(|| format!("expected key=value, got `{item}`"))?;
            let value: u64 = value.trim().parse().with_context(|| format!("`{key}` needs a non-negative integer"))?;
            let small = || usize::try_from(value).context("value too large");
            match key.trim() {
                "table_arity_cap" => self.table_arity_cap = small()?,
                "witness_table_cap" => self.witness_table_cap = small()?,
                "bfs_node_budget" => self.bfs_node_budget = value,
                "bfs_depth_cap" => self.bfs_depth_cap = small()?,
                "search_budget" => self.search_budget = value,
                other => bail!("unknown cap `{other}`"),
            }
        }
        self.validate()
    }

    pub fn synth(&self) -> SynthConfig {
        SynthConfig { witness_table_cap: self.witness_table_cap, search_budget: self.search_budget }
    }

    pub fn closure(&self, arity_cap: usize) -> ClosureConfig {
        ClosureConfig {
            arity_cap,
            depth_cap: self.bfs_depth_cap,
            node_budget: self.bfs_node_budget,
            table_cap: self.table_arity_cap,
        }
    }
}
