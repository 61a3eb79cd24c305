use std::fs::File;
use std::io::BufWriter;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::crosstab::{CrosstabReport, Outcome};
use super::trace::{round_sig9, EndRecord, StepRecord, TraceEpisode, TraceWriter};
use super::RunConfig;
use crate::episode::Episode;
use crate::error::{Error, Result};
use crate::grammar::TemplateLibrary;
use crate::world::sample_world;

/// Episodes simulated per parallel chunk before they are written out.
const CHUNK: usize = 256;

/// World seed of episode `index` in a run seeded with `run_seed`.
pub fn episode_seed(run_seed: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    rng.set_stream(index as u64);
    rng.next_u64()
}

/// Agent randomness for an episode. The world draws from stream 0 of the
/// same seed.
pub fn agent_rng(episode_seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(episode_seed);
    rng.set_stream(1);
    rng
}

/// Runs episode `index` of a batch. Step records are kept only when
/// `record` is set.
pub fn run_episode(
    lib: &TemplateLibrary,
    config: &RunConfig,
    index: usize,
    record: bool,
) -> Result<TraceEpisode> {
    let seed = episode_seed(config.seed, index);
    let world = sample_world(lib, config.mix, seed)?;
    let label = world.label;
    let mut ep = Episode::new(lib, world.clone(), config.episode_config())?;
    let mut agent = config.agent.build(lib, &ep)?;
    let mut rng = agent_rng(seed);

    let mut steps = Vec::new();
    while !ep.done() {
        let action = agent.act(&ep, &mut rng)?;
        let out = ep.step(action)?;
        agent.after_step(&ep);
        if record {
            steps.push(StepRecord {
                t: ep.t(),
                action: ep.env_id().action_id(action)?,
                reward: out.reward,
                done: out.done,
                answer: out.answer,
                label,
                obs: config.trace_obs.then(|| {
                    out.observation
                        .features
                        .iter()
                        .copied()
                        .map(round_sig9)
                        .collect()
                }),
            });
        }
    }
    let end = EndRecord {
        index,
        answer: ep.answer(),
        label,
        ret: ep.total_reward(),
        correct: ep.answer() == Some(label),
        steps: ep.t(),
        infeasible: agent.infeasible(),
    };
    Ok(TraceEpisode {
        index,
        seed,
        world,
        steps,
        end,
    })
}

/// Runs every episode of `config`, writes the trace if `config.out` is set
/// and returns the report.
pub fn run_batch(config: &RunConfig) -> Result<CrosstabReport> {
    config.validate()?;
    let lib = TemplateLibrary::builtin(config.env);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let mut writer = match &config.out {
        Some(path) => Some(TraceWriter::new(
            BufWriter::new(File::create(path)?),
            config,
        )?),
        None => None,
    };
    let record = writer.is_some();

    let mut report = CrosstabReport::empty(config.min_cell_count);
    for start in (0..config.episodes).step_by(CHUNK) {
        let end = (start + CHUNK).min(config.episodes);
        let chunk: Vec<Result<TraceEpisode>> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|i| run_episode(&lib, config, i, record))
                .collect()
        });
        for ep in chunk {
            let ep = ep?;
            report.add(&Outcome::from(&ep));
            if let Some(w) = &mut writer {
                w.write_episode(ep)?;
            }
        }
    }
    if let Some(w) = writer {
        w.finish()?;
    }
    Ok(report)
}
