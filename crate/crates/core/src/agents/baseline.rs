use rand::seq::SliceRandom;
use rand::RngCore;

use super::{Agent, CoinPredictor};
use crate::episode::Episode;
use crate::error::Result;
use crate::{Action, EnvId};

/// Stops at `t = 0`; the stop is resolved to an answer by a fair-coin prior.
#[derive(Debug, Clone, Default)]
pub struct NoActAgent {
    predictor: CoinPredictor,
}

impl NoActAgent {
    pub fn new() -> Self {
        NoActAgent::default()
    }
}

impl Agent for NoActAgent {
    fn act(&mut self, _ep: &Episode, rng: &mut dyn RngCore) -> Result<Action> {
        let answer = self.predictor.predict(rng).answer.unwrap_or(true);
        Ok(Action::from_answer(answer))
    }
}

/// Uniform over world actions and the two answers.
#[derive(Debug, Clone)]
pub struct RandomAgent {
    choices: Vec<Action>,
}

impl RandomAgent {
    pub fn new(env: EnvId) -> Self {
        let mut choices = env.world_actions().to_vec();
        choices.extend([Action::AnswerTrue, Action::AnswerFalse]);
        RandomAgent { choices }
    }

    pub fn choices(&self) -> &[Action] {
        &self.choices
    }
}

impl Agent for RandomAgent {
    fn act(&mut self, _ep: &Episode, rng: &mut dyn RngCore) -> Result<Action> {
        Ok(*self.choices.choose(rng).expect("non-empty action list"))
    }
}
