use super::runner::{episode_seed, run_episode};
use super::trace::{round_sig9, TraceEpisode};
use super::RunConfig;
use crate::episode::Episode;
use crate::error::{Error, Result};
use crate::grammar::TemplateLibrary;
use crate::world::sample_world;

/// Totals of a successful replay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplaySummary {
    pub index: usize,
    pub steps: usize,
    pub total_reward: f64,
}

/// Recomputes a recorded episode and checks it bit for bit.
///
/// The world is resampled from the episode seed, the recorded actions are
/// stepped through the environment, and the agent is run again from the
/// same seed. Any difference is a `Trace` error naming the first mismatch.
pub fn replay(config: &RunConfig, recorded: &TraceEpisode) -> Result<ReplaySummary> {
    let index = recorded.index;
    let fail = |what: String| Err(Error::Trace(format!("episode {index}: {what}")));

    if recorded.seed != episode_seed(config.seed, index) {
        return fail(format!(
            "seed {} is not the run's seed for this index",
            recorded.seed
        ));
    }
    let lib = TemplateLibrary::builtin(config.env);
    let world = sample_world(&lib, config.mix, recorded.seed)?;
    if world != recorded.world {
        return fail("resampled world differs from the recorded one".into());
    }

    let mut ep = Episode::new(&lib, world, config.episode_config())?;
    for (n, step) in recorded.steps.iter().enumerate() {
        if ep.done() {
            return fail(format!(
                "trace continues after the episode ended at step {n}"
            ));
        }
        let out = ep.step_id(step.action)?;
        if ep.t() != step.t {
            return fail(format!("step counter {} != recorded {}", ep.t(), step.t));
        }
        if out.reward.to_bits() != step.reward.to_bits() {
            return fail(format!(
                "t={}: reward {} != recorded {}",
                step.t, out.reward, step.reward
            ));
        }
        if out.done != step.done || out.answer != step.answer || ep.world().label != step.label {
            return fail(format!("t={}: done/answer/label differ", step.t));
        }
        if let Some(obs) = &step.obs {
            let same = obs.len() == out.observation.features.len()
                && obs
                    .iter()
                    .zip(&out.observation.features)
                    .all(|(r, v)| r.to_bits() == round_sig9(*v).to_bits());
            if !same {
                return fail(format!("t={}: observation differs", step.t));
            }
        }
    }
    if !ep.done() {
        return fail("recorded steps end before the episode does".into());
    }
    let end = &recorded.end;
    if ep.total_reward().to_bits() != end.ret.to_bits()
        || ep.answer() != end.answer
        || ep.t() != end.steps
        || (ep.answer() == Some(ep.world().label)) != end.correct
    {
        return fail("end record differs".into());
    }

    let rerun = run_episode(&lib, config, index, true)?;
    if rerun.steps.len() != recorded.steps.len() {
        return fail("agent rerun took a different number of steps".into());
    }
    if rerun != *recorded {
        return fail("agent rerun differs from the trace".into());
    }
    Ok(ReplaySummary {
        index,
        steps: ep.t(),
        total_reward: ep.total_reward(),
    })
}
