//! Non-learned agents: oracle predictor and policy, random and no-act
//! baselines.

mod baseline;
mod policy;
mod predictor;

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::episode::Episode;
use crate::error::{Error, Result};
use crate::grammar::TemplateLibrary;
use crate::Action;

pub use baseline::{NoActAgent, RandomAgent};
pub use policy::{cart_controller, oracle_plan, OracleAgent};
pub use predictor::{CoinPredictor, OraclePredictor};

/// Answer and the evidence behind it.
pub type AgentVerdict = crate::truth::Verdict;

/// An acting agent. Agents answer by emitting `answer_true`/`answer_false`.
pub trait Agent {
    fn act(&mut self, ep: &Episode, rng: &mut dyn RngCore) -> Result<Action>;

    /// Set when the agent could not produce decisive evidence.
    fn infeasible(&self) -> bool {
        false
    }

    /// Called after every step the agent's action produced.
    fn after_step(&mut self, _ep: &Episode) {}
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    NoAct,
    Random,
    Oracle,
}

impl AgentKind {
    pub const ALL: [AgentKind; 3] = [AgentKind::NoAct, AgentKind::Random, AgentKind::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            AgentKind::NoAct => "no_act",
            AgentKind::Random => "random",
            AgentKind::Oracle => "oracle",
        }
    }

    /// Builds the agent for the episode's world.
    pub fn build<'a>(self, lib: &'a TemplateLibrary, ep: &Episode) -> Result<Box<dyn Agent + 'a>> {
        Ok(match self {
            AgentKind::NoAct => Box::new(NoActAgent::new()),
            AgentKind::Random => Box::new(RandomAgent::new(ep.env_id())),
            AgentKind::Oracle => Box::new(OracleAgent::new(lib, ep)?),
        })
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AgentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "no_act" | "noact" | "no-act" => Ok(AgentKind::NoAct),
            "random" => Ok(AgentKind::Random),
            "oracle" => Ok(AgentKind::Oracle),
            _ => Err(Error::Config(format!("unknown agent `{s}`"))),
        }
    }
}
