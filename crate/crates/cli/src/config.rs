use std::path::Path;

use anyhow::Context;
use phasefn::phase::{NewtonOptions, DEFAULT_FILTER_MARGIN, DEFAULT_GRID};
use serde::Deserialize;

/// Run configuration, read from JSON. Missing fields take their defaults.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Newton tolerance on the normalized residual.
    pub tol: f64,
    /// Collocation order used once the solution is under-resolved.
    pub max_order: usize,
    pub filter_margin: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_order: DEFAULT_GRID,
            filter_margin: DEFAULT_FILTER_MARGIN,
            seed: 20140101,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn newton_options(&self) -> NewtonOptions {
        NewtonOptions {
            tol: self.tol,
            filter_margin: self.filter_margin,
            grid: self.max_order,
            ..NewtonOptions::default()
        }
    }
}
