//! Run configuration: defaults, then the config file, then command-line flags.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use secant_core::homotopy::{DEFAULT_DEDUP_TOL, DEFAULT_LOOP_BUDGET};
use secant_core::linalg::RANK_TOL;
use serde::{Deserialize, Serialize};

pub const DEFAULT_NEWTON_TOL: f64 = 1e-10;
pub const DEFAULT_VANISH_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Desk,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Human,
    Json,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("bad config file: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

/// One layer of settings; unset keys fall through to the layer below.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub output: Option<Output>,
    pub json: Option<bool>,
    pub tier: Option<Tier>,
    pub tol_newton: Option<f64>,
    pub tol_dedup: Option<f64>,
    pub tol_rank: Option<f64>,
    pub tol_vanish: Option<f64>,
    pub loop_budget: Option<usize>,
}

impl ConfigLayer {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    fn output(&self) -> Option<Output> {
        self.output.or(self.json.map(|j| if j { Output::Json } else { Output::Human }))
    }

    /// `self` where set, otherwise `below`.
    pub fn over(self, below: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            seed: self.seed.or(below.seed),
            threads: self.threads.or(below.threads),
            output: self.output().or(below.output()),
            json: None,
            tier: self.tier.or(below.tier),
            tol_newton: self.tol_newton.or(below.tol_newton),
            tol_dedup: self.tol_dedup.or(below.tol_dedup),
            tol_rank: self.tol_rank.or(below.tol_rank),
            tol_vanish: self.tol_vanish.or(below.tol_vanish),
            loop_budget: self.loop_budget.or(below.loop_budget),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub threads: usize,
    pub tol_newton: f64,
    pub tol_dedup: f64,
    pub tol_rank: f64,
    pub tol_vanish: f64,
    pub loop_budget: usize,
    pub output: Output,
    pub tier: Tier,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            tol_newton: DEFAULT_NEWTON_TOL,
            tol_dedup: DEFAULT_DEDUP_TOL,
            tol_rank: RANK_TOL,
            tol_vanish: DEFAULT_VANISH_TOL,
            loop_budget: DEFAULT_LOOP_BUDGET,
            output: Output::Human,
            tier: Tier::Desk,
        }
    }
}

impl RunConfig {
    pub fn from_layer(layer: ConfigLayer) -> Result<Self, ConfigError> {
        let d = RunConfig::default();
        let cfg = RunConfig {
            seed: layer.seed.unwrap_or(d.seed),
            threads: layer.threads.unwrap_or(d.threads),
            tol_newton: layer.tol_newton.unwrap_or(d.tol_newton),
            tol_dedup: layer.tol_dedup.unwrap_or(d.tol_dedup),
            tol_rank: layer.tol_rank.unwrap_or(d.tol_rank),
            tol_vanish: layer.tol_vanish.unwrap_or(d.tol_vanish),
            loop_budget: layer.loop_budget.unwrap_or(d.loop_budget),
            output: layer.output().unwrap_or(d.output),
            tier: layer.tier.unwrap_or(d.tier),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.threads == 0 {
            return Err(ConfigError::Invalid("threads must be positive".into()));
        }
        if self.loop_budget == 0 {
            return Err(ConfigError::Invalid("loop budget must be positive".into()));
        }
        let tols = [
            ("tol-newton", self.tol_newton),
            ("tol-dedup", self.tol_dedup),
            ("tol-rank", self.tol_rank),
            ("tol-vanish", self.tol_vanish),
        ];
        for (name, t) in tols {
            if !(t.is_finite() && t > 0.0) {
                return Err(ConfigError::Invalid(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    /// The generator for one subcommand: the run seed on a stream of its own.
    pub fn rng_for(&self, stream: Stream) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream as u64);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Dimension = 1,
    Degree = 2,
    Invariant = 3,
    Flatten = 4,
    Certify = 5,
}
