//! World construction: hidden law, layout and the visible hypothesis.

mod law;
mod sampler;

use serde::{Deserialize, Serialize};

use crate::cartpole::CartLayout;
use crate::grammar::Hypothesis;
use crate::gridworld::GridState;
use crate::EnvId;

pub use law::{Entity, Law, RuleSet};
pub use sampler::{
    ruleset_from_hypothesis, sample_false_hypothesis, sample_world, sample_world_with,
    spawn_layout, RETRY_BUDGET,
};

/// Initial placement of the agent and entities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    Grid(GridState),
    Cart(CartLayout),
}

/// A sampled world and the hypothesis shown to the agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldInstance {
    pub env_id: EnvId,
    pub ruleset: RuleSet,
    pub layout: Layout,
    pub visible: Hypothesis,
    pub label: bool,
    pub hidden_true: Hypothesis,
    pub hidden_false: Hypothesis,
    /// Seed that regenerates this world.
    pub seed: u64,
}
