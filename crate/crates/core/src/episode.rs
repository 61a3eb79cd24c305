//! The episodic interface shared by all four environments.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cartpole::{CartEncoder, CartSnapshot, CartpoleParams};
use crate::error::{Error, Result};
use crate::grammar::{HypothesisKind, TemplateLibrary};
use crate::gridworld::{GridEncoder, GridState, ItemState};
use crate::rewards::{reward, RewardContext, RewardSpec};
use crate::truth::{interpret, Claim, Triplet};
use crate::world::{Entity, Law, Layout, WorldInstance};
use crate::{Action, EnvId};

/// Full environment state, including anything derived from the hidden law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorldState {
    Grid(GridState),
    Cart(CartSnapshot),
}

impl WorldState {
    pub fn initial(layout: &Layout, law: &Law) -> WorldState {
        match layout {
            Layout::Grid(g) => {
                let mut g = g.clone();
                g.refresh_door(law);
                WorldState::Grid(g)
            }
            Layout::Cart(c) => WorldState::Cart(CartSnapshot::new(c.init, c.zones.clone(), law)),
        }
    }

    /// Applies a world action under `law`.
    pub fn apply(&mut self, action: Action, law: &Law, params: &CartpoleParams<f64>) {
        match self {
            WorldState::Grid(g) => g.apply(action, law),
            WorldState::Cart(c) => *c = c.advance(params, action, law),
        }
    }

    /// State of every non-agent entity that can change.
    pub fn item_states(&self) -> BTreeMap<Entity, ItemState> {
        match self {
            WorldState::Grid(g) => g.item_states(),
            WorldState::Cart(_) => BTreeMap::new(),
        }
    }

    pub fn as_grid(&self) -> Option<&GridState> {
        match self {
            WorldState::Grid(g) => Some(g),
            WorldState::Cart(_) => None,
        }
    }

    pub fn as_cart(&self) -> Option<&CartSnapshot> {
        match self {
            WorldState::Cart(c) => Some(c),
            WorldState::Grid(_) => None,
        }
    }
}

/// One entry of the history window: a state and the action that led to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub state: WorldState,
    pub action: Option<Action>,
}

/// What the agent sees: encoded state plus hypothesis tokens. The hidden law
/// never enters it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub features: Vec<f64>,
    pub tokens: Vec<u32>,
}

#[derive(Debug, Clone)]
enum Encoder {
    Grid(GridEncoder),
    Cart(CartEncoder),
}

impl Encoder {
    fn new(lib: &TemplateLibrary) -> Encoder {
        if lib.env_id().is_gridworld() {
            Encoder::Grid(GridEncoder::new(lib))
        } else {
            Encoder::Cart(CartEncoder::new(lib))
        }
    }

    fn len(&self) -> usize {
        match self {
            Encoder::Grid(e) => e.len(),
            Encoder::Cart(e) => e.len(),
        }
    }

    fn encode(&self, state: &WorldState) -> Vec<f64> {
        match (self, state) {
            (Encoder::Grid(e), WorldState::Grid(g)) => e.encode(g),
            (Encoder::Cart(e), WorldState::Cart(c)) => e.encode(c),
            _ => unreachable!("encoder is built for the world's environment"),
        }
    }
}

/// Length of the encoded state for an environment.
pub fn observation_length(lib: &TemplateLibrary) -> usize {
    Encoder::new(lib).len()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpisodeConfig {
    pub horizon: usize,
    pub reward: RewardSpec,
}

impl EpisodeConfig {
    pub fn for_env(env: EnvId) -> EpisodeConfig {
        EpisodeConfig {
            horizon: env.default_horizon(),
            reward: RewardSpec::hyp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub observation: Observation,
    pub reward: f64,
    pub done: bool,
    pub answer: Option<bool>,
}

/// Entities named by a claim's slots.
pub(crate) fn referenced_entities(claim: &Claim) -> BTreeSet<Entity> {
    use crate::truth::Condition;
    let mut out = BTreeSet::new();
    for cond in claim.conditions() {
        let e = match cond {
            Condition::SwitchIs { color, .. } => Entity::Switch(color.clone()),
            Condition::BlockIn(_) => Entity::Block,
            Condition::Has(i) => Entity::Item(i.clone()),
            Condition::At(l) => Entity::Station(l.clone()),
            Condition::InZone(c) => Entity::Zone(c.clone()),
            _ => continue,
        };
        out.insert(e);
    }
    out
}

/// One episode: an isolated state machine over a sampled world.
#[derive(Debug, Clone)]
pub struct Episode {
    world: WorldInstance,
    config: EpisodeConfig,
    encoder: Encoder,
    params: CartpoleParams<f64>,
    triplet: Option<Triplet>,
    referenced: BTreeSet<Entity>,
    history: Vec<Frame>,
    t: usize,
    done: bool,
    answer: Option<bool>,
    total: f64,
}

impl Episode {
    /// Builds and resets an episode.
    pub fn new(
        lib: &TemplateLibrary,
        world: WorldInstance,
        config: EpisodeConfig,
    ) -> Result<Episode> {
        if lib.env_id() != world.env_id || world.ruleset.env_id != world.env_id {
            return Err(Error::EnvMismatch);
        }
        match (&world.layout, world.env_id.is_gridworld()) {
            (Layout::Grid(_), true) | (Layout::Cart(_), false) => {}
            _ => return Err(Error::EnvMismatch),
        }
        let claim = interpret(lib, &world.visible.form)?;
        let triplet = match (&claim, world.visible.kind()) {
            (Claim::Implies(t), HypothesisKind::Triplet) => Some(t.clone()),
            _ => None,
        };
        if config.reward.kind.needs_triplet() && triplet.is_none() {
            return Err(Error::NotTriplet);
        }
        let mut ep = Episode {
            encoder: Encoder::new(lib),
            params: CartpoleParams::classic(),
            referenced: referenced_entities(&claim),
            triplet,
            history: Vec::new(),
            world,
            config,
            t: 0,
            done: false,
            answer: None,
            total: 0.0,
        };
        ep.reset();
        Ok(ep)
    }

    /// Restores the initial layout and returns `o_0`.
    pub fn reset(&mut self) -> Observation {
        let state = WorldState::initial(&self.world.layout, &self.world.ruleset.law);
        self.history = vec![Frame {
            state,
            action: None,
        }];
        self.t = 0;
        self.done = false;
        self.answer = None;
        self.total = 0.0;
        self.observation()
    }

    pub fn observation(&self) -> Observation {
        Observation {
            features: self.encoder.encode(self.state()),
            tokens: self.world.visible.tokens.clone(),
        }
    }

    pub fn step_id(&mut self, id: usize) -> Result<StepOutcome> {
        let action = self.world.env_id.action(id)?;
        self.step(action)
    }

    pub fn step(&mut self, action: Action) -> Result<StepOutcome> {
        if self.done {
            return Err(Error::EpisodeDone);
        }
        self.world.env_id.action_id(action)?;
        self.t += 1;
        if action.is_terminal() {
            self.done = true;
            self.answer = action.answer();
        } else {
            let mut state = self.state().clone();
            state.apply(action, &self.world.ruleset.law, &self.params);
            let fell = matches!(&state, WorldState::Cart(c) if self.params.failed(&c.cart));
            self.history.push(Frame {
                state,
                action: Some(action),
            });
            let cap = self.config.reward.k + 1;
            if self.history.len() > cap {
                self.history.drain(..self.history.len() - cap);
            }
            self.done = fell || self.t >= self.config.horizon;
        }
        let ctx = RewardContext {
            window: &self.history,
            action,
            label: self.world.label,
            triplet: self.triplet.as_ref(),
            referenced: &self.referenced,
        };
        let r = reward(&self.config.reward, &ctx)?;
        self.total += r;
        Ok(StepOutcome {
            observation: self.observation(),
            reward: r,
            done: self.done,
            answer: self.answer,
        })
    }

    pub fn state(&self) -> &WorldState {
        &self.history.last().expect("history is never empty").state
    }

    /// The last `K + 1` frames, oldest first.
    pub fn window(&self) -> &[Frame] {
        &self.history
    }

    pub fn world(&self) -> &WorldInstance {
        &self.world
    }

    pub fn config(&self) -> &EpisodeConfig {
        &self.config
    }

    pub fn params(&self) -> &CartpoleParams<f64> {
        &self.params
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn done(&self) -> bool {
        self.done
    }

    pub fn answer(&self) -> Option<bool> {
        self.answer
    }

    pub fn total_reward(&self) -> f64 {
        self.total
    }

    pub fn env_id(&self) -> EnvId {
        self.world.env_id
    }
}
