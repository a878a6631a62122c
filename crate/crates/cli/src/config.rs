use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use tsgraph::counting::BoundsConfig;
use tsgraph::tscode::DEFAULT_MAX_EXACT;

use crate::error::{CliError, CliResult};

pub const DEFAULT_SEED: u64 = 20240601;

/// Settings shared by every subcommand.
#[derive(Clone, Debug, Args)]
pub struct Config {
    /// Largest n for which an exact codebook is built.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_EXACT)]
    pub n_max_exact: usize,

    /// Smallest μ treated as inside the asymptotic regime of the class-size bounds.
    #[arg(long, global = true, default_value_t = 10.0)]
    pub mu_min: f64,

    /// Slack in bits allowed on the class-size bounds.
    #[arg(long, global = true, default_value_t = 2.0)]
    pub slack_bits: f64,

    /// Constant A in the normal-approximation check D_m·√m ≤ A.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub berry_a: f64,

    /// Directory for cached codebooks.
    #[arg(long, global = true, env = "TSGRAPH_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

impl Config {
    pub fn validate(&self) -> CliResult<()> {
        let positive = [
            ("--mu-min", self.mu_min),
            ("--slack-bits", self.slack_bits),
            ("--berry-a", self.berry_a),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(CliError::Config(format!("{name} must be positive, got {value}")));
            }
        }
        if self.n_max_exact == 0 {
            return Err(CliError::Config("--n-max-exact must be positive".into()));
        }
        Ok(())
    }

    pub fn bounds(&self) -> BoundsConfig {
        BoundsConfig {
            mu_min: self.mu_min,
            slack_bits: self.slack_bits,
        }
    }

    /// The cache directory, created if missing. Falls back to the user cache
    /// directory and then to `.tsgraph-cache` under the working directory.
    pub fn cache_dir(&self) -> CliResult<PathBuf> {
        let dir = match &self.cache_dir {
            Some(dir) => dir.clone(),
            None => default_cache_dir(),
        };
        fs::create_dir_all(&dir)
            .map_err(|e| CliError::Config(format!("cache directory {} is not usable: {e}", dir.display())))?;
        Ok(dir)
    }
}

fn default_cache_dir() -> PathBuf {
    if let Some(xdg) = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        return Path::new(&xdg).join("tsgraph");
    }
    if let Some(home) = std::env::var_os("HOME").filter(|v| !v.is_empty()) {
        return Path::new(&home).join(".cache").join("tsgraph");
    }
    PathBuf::from(".tsgraph-cache")
}
