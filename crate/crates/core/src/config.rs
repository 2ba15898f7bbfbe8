//! JSON run and generator configuration. Keys are flat snake_case field
//! names; unknown keys are rejected and every omitted key takes its default.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explore::{BanditConfig, ExploitationStrategy, SelectionMode};
use crate::graph::PageRankConfig;
use crate::model::{ModelConfig, SocialMode};
use crate::synthetic::SyntheticSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Friend paths per user (`B`).
    pub beam_width: usize,
    /// Friends per path (`L`).
    pub depth: usize,
    pub lambda: f64,
    pub epsilon: f64,
    pub greedy_below_epsilon: bool,
    pub strategy: ExploitationStrategy,
    pub mode: SelectionMode,
    pub dim_hidden: usize,
    /// `"dynamic"` or `{"static": {"kernel": "rbf", "gamma": 0.5}}`.
    pub social_mode: SocialMode,
    pub learn_rate: f64,
    pub epochs_per_day: usize,
    pub batch_size: usize,
    /// Keywords per user profile (`m`).
    pub user_keywords: usize,
    /// Keywords per document profile (`n`).
    pub doc_keywords: usize,
    pub threshold: f64,
    /// First training day; defaults to the first day with logs.
    pub start_day: Option<i64>,
    /// Last training day; defaults to the day before the last day with logs.
    pub end_day: Option<i64>,
    pub damping: f64,
    pub tolerance: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let b = BanditConfig::default();
        let m = ModelConfig::default();
        let p = PageRankConfig::default();
        RunConfig {
            beam_width: b.beam_width,
            depth: b.depth,
            lambda: b.lambda,
            epsilon: b.epsilon,
            greedy_below_epsilon: b.greedy_below_epsilon,
            strategy: ExploitationStrategy::RsF1,
            mode: SelectionMode::Mcts,
            dim_hidden: m.dim_hidden,
            social_mode: m.social_mode,
            learn_rate: m.learn_rate,
            epochs_per_day: m.epochs_per_day,
            batch_size: m.batch_size,
            user_keywords: 200,
            doc_keywords: 90,
            threshold: 0.5,
            start_day: None,
            end_day: None,
            damping: p.damping,
            tolerance: p.tolerance,
            max_iters: p.max_iters,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn bandit(&self) -> BanditConfig {
        BanditConfig {
            beam_width: self.beam_width,
            depth: self.depth,
            lambda: self.lambda,
            epsilon: self.epsilon,
            greedy_below_epsilon: self.greedy_below_epsilon,
            seed: self.seed,
        }
    }

    pub fn model(&self, dim_embed: usize) -> ModelConfig {
        ModelConfig {
            dim_embed,
            dim_hidden: self.dim_hidden,
            social_mode: self.social_mode,
            learn_rate: self.learn_rate,
            epochs_per_day: self.epochs_per_day,
            batch_size: self.batch_size,
            seed: self.seed,
        }
    }

    pub fn pagerank(&self) -> PageRankConfig {
        PageRankConfig {
            damping: self.damping,
            tolerance: self.tolerance,
            max_iters: self.max_iters,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.bandit().validate()?;
        self.model(1).validate()?;
        self.pagerank().validate()?;
        if self.user_keywords == 0 {
            return Err(Error::config("user_keywords", "must be positive"));
        }
        if self.doc_keywords == 0 {
            return Err(Error::config("doc_keywords", "must be positive"));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::config("threshold", "must lie in (0, 1)"));
        }
        if let (Some(a), Some(b)) = (self.start_day, self.end_day) {
            if a > b {
                return Err(Error::config("end_day", "must not precede start_day"));
            }
        }
        Ok(())
    }
}

/// Parses JSON into `T`, reporting the offending key on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let msg = inner.to_string();
        // unknown keys are reported by serde against the enclosing object
        let key = msg
            .strip_prefix("unknown field `")
            .and_then(|rest| rest.split('`').next())
            .map(str::to_string)
            .unwrap_or(path);
        Error::config(key, msg)
    })
}

fn read_config(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::config("config", format!("{}: {e}", path.display())))
}

pub fn load_run_config(path: &Path) -> Result<RunConfig> {
    let cfg: RunConfig = parse_json(&read_config(path)?)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_synthetic_spec(path: &Path) -> Result<SyntheticSpec> {
    let spec: SyntheticSpec = parse_json(&read_config(path)?)?;
    spec.validate()?;
    Ok(spec)
}

pub fn save_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("config serialises");
    std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}
