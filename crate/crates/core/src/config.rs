use serde::Serialize;
use serde_json::{json, Value};

use crate::presentation::Backend;

/// Environment variable overriding the default working precision.
pub const PREC_ENV: &str = "HYPERORBIT_PREC";
pub const DEFAULT_PREC: usize = 192;
pub const DEFAULT_MAX_RELATION_NORM: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    /// Exact when every input entry lies in the field tower, numeric otherwise.
    #[default]
    Auto,
    Exact,
    Numeric,
}

impl std::fmt::Display for BackendChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BackendChoice::Auto => "auto",
            BackendChoice::Exact => "exact",
            BackendChoice::Numeric => "numeric",
        })
    }
}

impl From<Backend> for BackendChoice {
    fn from(b: Backend) -> Self {
        match b {
            Backend::Exact => BackendChoice::Exact,
            Backend::Numeric => BackendChoice::Numeric,
        }
    }
}

/// Settings of one decision run. Numeric tolerances are derived from `prec`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub prec: usize,
    pub max_relation_norm: u64,
    pub include_first_block: bool,
    pub backend: BackendChoice,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prec: default_prec(),
            max_relation_norm: DEFAULT_MAX_RELATION_NORM,
            include_first_block: false,
            backend: BackendChoice::Auto,
            seed: 0,
        }
    }
}

/// `HYPERORBIT_PREC` when set to a positive integer, else 192.
pub fn default_prec() -> usize {
    std::env::var(PREC_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&p: &usize| p > 0)
        .unwrap_or(DEFAULT_PREC)
}

impl RunConfig {
    pub fn with_prec(prec: usize) -> Self {
        RunConfig { prec, ..RunConfig::default() }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "prec": self.prec,
            "max_relation_norm": self.max_relation_norm,
            "include_first_block": self.include_first_block,
            "backend": self.backend.to_string(),
            "seed": self.seed,
            "tolerances_log2": {
                "numeric_equality": -(self.prec as f64) / 2.0,
                "relation_residual": -(2.0 * self.prec as f64) / 3.0,
            },
        })
    }
}
