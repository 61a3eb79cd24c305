//! Reward functions: the verification reward, the pre-condition pretraining
//! rewards and the four intrinsic schemes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::episode::Frame;
use crate::error::{Error, Result};
use crate::truth::{condition_changed, Triplet};
use crate::world::Entity;
use crate::{Action, EnvId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardKind {
    Hyp,
    Pre,
    /// Pretraining composite: `R_pre + R_pre+post`.
    PrePost,
    IntrinsicI,
    IntrinsicIi,
    IntrinsicIii,
    IntrinsicIv,
}

impl RewardKind {
    pub const ALL: [RewardKind; 7] = [
        RewardKind::Hyp,
        RewardKind::Pre,
        RewardKind::PrePost,
        RewardKind::IntrinsicI,
        RewardKind::IntrinsicIi,
        RewardKind::IntrinsicIii,
        RewardKind::IntrinsicIv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RewardKind::Hyp => "hyp",
            RewardKind::Pre => "pre",
            RewardKind::PrePost => "pre_post",
            RewardKind::IntrinsicI => "intrinsic_i",
            RewardKind::IntrinsicIi => "intrinsic_ii",
            RewardKind::IntrinsicIii => "intrinsic_iii",
            RewardKind::IntrinsicIv => "intrinsic_iv",
        }
    }

    pub fn timing(self) -> Timing {
        match self {
            RewardKind::IntrinsicIii | RewardKind::IntrinsicIv => Timing::Dense,
            _ => Timing::OnStop,
        }
    }

    pub fn needs_triplet(self) -> bool {
        matches!(self, RewardKind::Pre | RewardKind::PrePost)
    }
}

impl fmt::Display for RewardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RewardKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RewardKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown reward kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Timing {
    OnStop,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardSpec {
    pub kind: RewardKind,
    /// Reward constant `C`.
    pub c: f64,
    /// Window length `K` in transitions.
    pub k: usize,
}

pub const DEFAULT_K: usize = 5;

impl RewardSpec {
    /// Default constants for `kind` in `env`.
    pub fn new(kind: RewardKind, env: EnvId) -> RewardSpec {
        let c = match kind {
            RewardKind::Hyp => 1.0,
            RewardKind::Pre
            | RewardKind::PrePost
            | RewardKind::IntrinsicI
            | RewardKind::IntrinsicIi => 10.0,
            RewardKind::IntrinsicIii | RewardKind::IntrinsicIv => match env {
                EnvId::Crafting => 5.0,
                _ => 1.0,
            },
        };
        RewardSpec {
            kind,
            c,
            k: DEFAULT_K,
        }
    }

    pub fn hyp() -> RewardSpec {
        RewardSpec {
            kind: RewardKind::Hyp,
            c: 1.0,
            k: DEFAULT_K,
        }
    }

    pub fn timing(&self) -> Timing {
        self.kind.timing()
    }
}

/// What the reward functions see at one step.
#[derive(Debug, Clone, Copy)]
pub struct RewardContext<'a> {
    /// Last `K + 1` frames, oldest first.
    pub window: &'a [Frame],
    pub action: Action,
    pub label: bool,
    pub triplet: Option<&'a Triplet>,
    pub referenced: &'a BTreeSet<Entity>,
}

/// `+1` for a correct answer, `-1` for a wrong one, `0` otherwise.
pub fn hyp_reward(action: Action, label: bool) -> f64 {
    match action.answer() {
        Some(a) if a == label => 1.0,
        Some(_) => -1.0,
        None => 0.0,
    }
}

/// `+C` at a terminal action iff the pre-condition changed in the window.
pub fn pre_reward(window: &[Frame], triplet: &Triplet, action: Action, c: f64) -> Result<f64> {
    if action.is_terminal() && condition_changed(&triplet.pre, window)? {
        Ok(c)
    } else {
        Ok(0.0)
    }
}

/// `+C` at a terminal action iff both the pre- and post-condition changed.
pub fn pre_post_reward(window: &[Frame], triplet: &Triplet, action: Action, c: f64) -> Result<f64> {
    if action.is_terminal()
        && condition_changed(&triplet.pre, window)?
        && condition_changed(&triplet.post, window)?
    {
        Ok(c)
    } else {
        Ok(0.0)
    }
}

fn pair_changed(a: &Frame, b: &Frame, only: Option<&BTreeSet<Entity>>) -> bool {
    let (sa, sb) = (a.state.item_states(), b.state.item_states());
    let keys: BTreeSet<&Entity> = sa.keys().chain(sb.keys()).collect();
    let changed = keys
        .into_iter()
        .filter(|e| only.is_none_or(|set| set.contains(*e)))
        .any(|e| sa.get(e) != sb.get(e));
    changed
}

/// Whether any item (or any item in `only`) changed state between
/// consecutive frames of the window.
pub fn item_changed(window: &[Frame], only: Option<&BTreeSet<Entity>>) -> bool {
    window.windows(2).any(|p| pair_changed(&p[0], &p[1], only))
}

/// Intrinsic schemes: i/ii pay at a terminal action for any change in the
/// window, iii/iv pay on each transition that changes an item.
pub fn intrinsic_reward(kind: RewardKind, ctx: &RewardContext<'_>, c: f64) -> f64 {
    let only = match kind {
        RewardKind::IntrinsicIi | RewardKind::IntrinsicIv => Some(ctx.referenced),
        _ => None,
    };
    let hit = match kind {
        RewardKind::IntrinsicI | RewardKind::IntrinsicIi => {
            ctx.action.is_terminal() && item_changed(ctx.window, only)
        }
        RewardKind::IntrinsicIii | RewardKind::IntrinsicIv => {
            !ctx.action.is_terminal()
                && ctx.window.len() >= 2
                && pair_changed(
                    &ctx.window[ctx.window.len() - 2],
                    &ctx.window[ctx.window.len() - 1],
                    only,
                )
        }
        _ => false,
    };
    if hit {
        c
    } else {
        0.0
    }
}

/// Reward for one step under `spec`.
pub fn reward(spec: &RewardSpec, ctx: &RewardContext<'_>) -> Result<f64> {
    match spec.kind {
        RewardKind::Hyp => Ok(hyp_reward(ctx.action, ctx.label)),
        RewardKind::Pre => pre_reward(
            ctx.window,
            ctx.triplet.ok_or(Error::NotTriplet)?,
            ctx.action,
            spec.c,
        ),
        RewardKind::PrePost => {
            let t = ctx.triplet.ok_or(Error::NotTriplet)?;
            Ok(pre_reward(ctx.window, t, ctx.action, spec.c)?
                + pre_post_reward(ctx.window, t, ctx.action, spec.c)?)
        }
        kind => Ok(intrinsic_reward(kind, ctx, spec.c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyp_table() {
        assert_eq!(hyp_reward(Action::AnswerTrue, true), 1.0);
        assert_eq!(hyp_reward(Action::AnswerFalse, true), -1.0);
        assert_eq!(hyp_reward(Action::AnswerFalse, false), 1.0);
        assert_eq!(hyp_reward(Action::Left, false), 0.0);
        assert_eq!(hyp_reward(Action::Stop, true), 0.0);
    }

    #[test]
    fn default_constants() {
        assert_eq!(RewardSpec::new(RewardKind::Pre, EnvId::ColorSwitch).c, 10.0);
        assert_eq!(
            RewardSpec::new(RewardKind::IntrinsicIii, EnvId::ColorSwitch).c,
            1.0
        );
        assert_eq!(
            RewardSpec::new(RewardKind::IntrinsicIii, EnvId::Pushblock).c,
            1.0
        );
        assert_eq!(
            RewardSpec::new(RewardKind::IntrinsicIv, EnvId::Crafting).c,
            5.0
        );
        assert_eq!(
            RewardSpec::new(RewardKind::IntrinsicI, EnvId::Crafting).c,
            10.0
        );
        assert_eq!(RewardSpec::new(RewardKind::Hyp, EnvId::Crafting).k, 5);
    }

    #[test]
    fn timings() {
        assert_eq!(RewardKind::Pre.timing(), Timing::OnStop);
        assert_eq!(RewardKind::PrePost.timing(), Timing::OnStop);
        assert_eq!(RewardKind::IntrinsicI.timing(), Timing::OnStop);
        assert_eq!(RewardKind::IntrinsicIi.timing(), Timing::OnStop);
        assert_eq!(RewardKind::IntrinsicIii.timing(), Timing::Dense);
        assert_eq!(RewardKind::IntrinsicIv.timing(), Timing::Dense);
        for k in RewardKind::ALL {
            assert_eq!(k.name().parse::<RewardKind>().unwrap(), k);
        }
    }
}
