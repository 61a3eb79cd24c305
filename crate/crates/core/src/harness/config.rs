use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agents::AgentKind;
use crate::episode::EpisodeConfig;
use crate::error::{Error, Result};
use crate::grammar::KindMix;
use crate::rewards::{RewardKind, RewardSpec, DEFAULT_K};
use crate::EnvId;

/// Batch run settings. Loaded from a flat TOML file; every key is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub env: EnvId,
    pub agent: AgentKind,
    pub reward: RewardKind,
    /// Overrides the reward constant `C`.
    pub c: Option<f64>,
    pub k: usize,
    pub mix: KindMix,
    pub episodes: usize,
    pub seed: u64,
    /// Defaults to the environment's horizon.
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Write flattened observations into step records.
    pub trace_obs: bool,
    /// Worker threads; `None` uses every core.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Report cells with fewer episodes are flagged.
    pub min_cell_count: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            env: EnvId::ColorSwitch,
            agent: AgentKind::Oracle,
            reward: RewardKind::Hyp,
            c: None,
            k: DEFAULT_K,
            mix: KindMix::TRIPLET_ONLY,
            episodes: 100,
            seed: 0,
            horizon: None,
            out: None,
            trace_obs: true,
            workers: None,
            min_cell_count: 0,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        RunConfig::from_toml(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.episodes == 0 {
            return Err(Error::Config("episodes must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if self.horizon == Some(0) {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if let Some(c) = self.c {
            if !c.is_finite() {
                return Err(Error::Config(format!("reward constant {c} is not finite")));
            }
        }
        if self.reward.needs_triplet() && self.mix != KindMix::TRIPLET_ONLY {
            return Err(Error::Config(format!(
                "reward `{}` needs triplet hypotheses, got mix `{}`",
                self.reward, self.mix
            )));
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.horizon.unwrap_or(self.env.default_horizon())
    }

    pub fn reward_spec(&self) -> RewardSpec {
        let mut spec = RewardSpec::new(self.reward, self.env);
        spec.k = self.k;
        if let Some(c) = self.c {
            spec.c = c;
        }
        spec
    }

    pub fn episode_config(&self) -> EpisodeConfig {
        EpisodeConfig {
            horizon: self.horizon(),
            reward: self.reward_spec(),
        }
    }
}
