//! Environment identifiers and the shared action alphabet.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvId {
    ColorSwitch,
    Pushblock,
    Crafting,
    Cartpole,
}

impl EnvId {
    pub const ALL: [EnvId; 4] = [
        EnvId::ColorSwitch,
        EnvId::Pushblock,
        EnvId::Crafting,
        EnvId::Cartpole,
    ];

    pub const GRIDWORLDS: [EnvId; 3] = [EnvId::ColorSwitch, EnvId::Pushblock, EnvId::Crafting];

    pub fn name(self) -> &'static str {
        match self {
            EnvId::ColorSwitch => "colorswitch",
            EnvId::Pushblock => "pushblock",
            EnvId::Crafting => "crafting",
            EnvId::Cartpole => "cartpole",
        }
    }

    pub fn is_gridworld(self) -> bool {
        !matches!(self, EnvId::Cartpole)
    }

    /// Ordered action list. Answer actions and `stop` close every list.
    pub fn action_space(self) -> &'static [Action] {
        use Action::*;
        match self {
            EnvId::ColorSwitch => &[Up, Down, Left, Right, Toggle, AnswerTrue, AnswerFalse, Stop],
            EnvId::Pushblock => &[Up, Down, Left, Right, AnswerTrue, AnswerFalse, Stop],
            EnvId::Crafting => &[
                Up,
                Down,
                Left,
                Right,
                Pickup,
                Craft,
                AnswerTrue,
                AnswerFalse,
                Stop,
            ],
            EnvId::Cartpole => &[Left, Right, AnswerTrue, AnswerFalse, Stop],
        }
    }

    /// World actions `A_W` only (no answers, no stop).
    pub fn world_actions(self) -> &'static [Action] {
        let all = self.action_space();
        &all[..all.len() - 3]
    }

    pub fn action(self, id: usize) -> Result<Action> {
        self.action_space()
            .get(id)
            .copied()
            .ok_or(Error::UnknownAction { env: self, id })
    }

    pub fn action_id(self, action: Action) -> Result<usize> {
        self.action_space()
            .iter()
            .position(|&a| a == action)
            .ok_or_else(|| Error::InvalidAction {
                env: self,
                action: action.name().to_string(),
            })
    }

    /// Default episode horizon.
    pub fn default_horizon(self) -> usize {
        match self {
            EnvId::Cartpole => 200,
            _ => 100,
        }
    }
}

impl fmt::Display for EnvId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnvId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "colorswitch" | "color_switch" => Ok(EnvId::ColorSwitch),
            "pushblock" => Ok(EnvId::Pushblock),
            "crafting" => Ok(EnvId::Crafting),
            "cartpole" => Ok(EnvId::Cartpole),
            other => Err(Error::Config(format!("unknown environment `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Up,
    Down,
    Left,
    Right,
    Toggle,
    Pickup,
    Craft,
    AnswerTrue,
    AnswerFalse,
    Stop,
}

impl Action {
    pub fn name(self) -> &'static str {
        match self {
            Action::Up => "up",
            Action::Down => "down",
            Action::Left => "left",
            Action::Right => "right",
            Action::Toggle => "toggle",
            Action::Pickup => "pickup",
            Action::Craft => "craft",
            Action::AnswerTrue => "answer_true",
            Action::AnswerFalse => "answer_false",
            Action::Stop => "stop",
        }
    }

    pub fn answer(self) -> Option<bool> {
        match self {
            Action::AnswerTrue => Some(true),
            Action::AnswerFalse => Some(false),
            _ => None,
        }
    }

    pub fn from_answer(answer: bool) -> Action {
        if answer {
            Action::AnswerTrue
        } else {
            Action::AnswerFalse
        }
    }

    pub fn is_terminal(self) -> bool {
        matches!(
            self,
            Action::AnswerTrue | Action::AnswerFalse | Action::Stop
        )
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_space_sizes() {
        assert_eq!(EnvId::ColorSwitch.action_space().len(), 8);
        assert_eq!(EnvId::Pushblock.action_space().len(), 7);
        assert_eq!(EnvId::Crafting.action_space().len(), 9);
        assert_eq!(EnvId::Cartpole.action_space().len(), 5);
    }

    #[test]
    fn pushblock_has_no_toggle() {
        assert!(!EnvId::Pushblock.action_space().contains(&Action::Toggle));
        assert!(EnvId::Crafting.world_actions().contains(&Action::Pickup));
        assert!(EnvId::Crafting.world_actions().contains(&Action::Craft));
        assert_eq!(
            EnvId::ColorSwitch.world_actions(),
            &[
                Action::Up,
                Action::Down,
                Action::Left,
                Action::Right,
                Action::Toggle
            ]
        );
    }

    #[test]
    fn unknown_action_id() {
        assert!(matches!(
            EnvId::Cartpole.action(5),
            Err(Error::UnknownAction { id: 5, .. })
        ));
        for env in EnvId::ALL {
            for (i, &a) in env.action_space().iter().enumerate() {
                assert_eq!(env.action_id(a).unwrap(), i);
            }
            assert_eq!(env.name().parse::<EnvId>().unwrap(), env);
        }
    }
}
