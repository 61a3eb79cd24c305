//! Deterministic engine for templated hypothesis-verification environments:
//! template grammar, world sampling, four environments, ground truth,
//! rewards, scripted agents and an episode harness.

pub mod agents;
pub mod cartpole;
mod env;
pub mod episode;
pub mod error;
pub mod grammar;
pub mod gridworld;
pub mod harness;
pub mod rewards;
pub mod truth;
pub mod world;

pub use env::{Action, EnvId};
pub use episode::{Episode, EpisodeConfig, Frame, Observation, StepOutcome, WorldState};
pub use error::{Error, Result};
pub use grammar::{Hypothesis, HypothesisKind, KindMix, SemanticForm, TemplateLibrary};
pub use rewards::{RewardKind, RewardSpec};
pub use world::{sample_world, Law, RuleSet, WorldInstance};

/// Scalar used by the environments.
pub type Real = f64;

/// Cart-pole constants at the environments' precision.
pub type CartParams = cartpole::CartpoleParams<Real>;

/// Cart-pole dynamics state at the environments' precision.
pub type CartDynamics = cartpole::CartState<Real>;

/// Single-precision cart-pole constants.
pub type CartParams32 = cartpole::CartpoleParams<f32>;

/// Single-precision cart-pole dynamics state.
pub type CartDynamics32 = cartpole::CartState<f32>;
