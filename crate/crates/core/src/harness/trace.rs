//! Line-delimited trace files: a version header, then one JSON record per
//! line. Each episode is an `episode` record, its `step` records and an
//! `end` record.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::RunConfig;
use crate::error::{Error, Result};
use crate::world::WorldInstance;

pub const TRACE_HEADER: &str = "#hypverify-trace v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub action: usize,
    pub reward: f64,
    pub done: bool,
    pub answer: Option<bool>,
    pub label: bool,
    /// Flattened observation after the step, at 9 significant digits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obs: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndRecord {
    pub index: usize,
    pub answer: Option<bool>,
    pub label: bool,
    #[serde(rename = "return")]
    pub ret: f64,
    pub correct: bool,
    pub steps: usize,
    pub infeasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum Record {
    Run {
        config: RunConfig,
    },
    Episode {
        index: usize,
        seed: u64,
        world: Box<WorldInstance>,
    },
    Step(StepRecord),
    End(EndRecord),
}

/// One recorded episode.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEpisode {
    pub index: usize,
    pub seed: u64,
    pub world: WorldInstance,
    pub steps: Vec<StepRecord>,
    pub end: EndRecord,
}

/// Rounds to 9 significant digits, the precision traces store.
pub fn round_sig9(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    format!("{v:.8e}").parse().expect("formatted float parses")
}

pub struct TraceWriter<W: Write> {
    out: W,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(mut out: W, config: &RunConfig) -> Result<TraceWriter<W>> {
        writeln!(out, "{TRACE_HEADER}")?;
        let mut w = TraceWriter { out };
        w.record(&Record::Run {
            config: config.clone(),
        })?;
        Ok(w)
    }

    fn record(&mut self, r: &Record) -> Result<()> {
        serde_json::to_writer(&mut self.out, r)?;
        self.out.write_all(b"\n")?;
        Ok(())
    }

    pub fn write_episode(&mut self, ep: TraceEpisode) -> Result<()> {
        self.record(&Record::Episode {
            index: ep.index,
            seed: ep.seed,
            world: Box::new(ep.world),
        })?;
        for s in ep.steps {
            self.record(&Record::Step(s))?;
        }
        self.record(&Record::End(ep.end))
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// A parsed trace file.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub config: RunConfig,
    pub episodes: Vec<TraceEpisode>,
}

impl Trace {
    pub fn load(path: &Path) -> Result<Trace> {
        Trace::read(BufReader::new(File::open(path)?))
    }

    pub fn read<R: BufRead>(input: R) -> Result<Trace> {
        let mut lines = input.lines().enumerate();
        let header = lines.next().map(|(_, l)| l).transpose()?;
        if header.as_deref().map(str::trim_end) != Some(TRACE_HEADER) {
            return Err(Error::Trace(format!("missing `{TRACE_HEADER}` header")));
        }
        let bad = |n: usize, msg: &str| Error::Trace(format!("line {}: {msg}", n + 1));

        let mut config = None;
        let mut episodes = Vec::new();
        let mut open: Option<(usize, u64, WorldInstance, Vec<StepRecord>)> = None;
        for (n, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record: Record = serde_json::from_str(&line).map_err(|e| bad(n, &e.to_string()))?;
            match record {
                Record::Run { config: c } => {
                    if config.replace(c).is_some() {
                        return Err(bad(n, "second run record"));
                    }
                }
                Record::Episode { index, seed, world } => {
                    if config.is_none() {
                        return Err(bad(n, "episode before the run record"));
                    }
                    if open.is_some() {
                        return Err(bad(n, "episode record before the previous end"));
                    }
                    open = Some((index, seed, *world, Vec::new()));
                }
                Record::Step(s) => match &mut open {
                    Some((.., steps)) => steps.push(s),
                    None => return Err(bad(n, "step outside an episode")),
                },
                Record::End(end) => {
                    let (index, seed, world, steps) = open
                        .take()
                        .ok_or_else(|| bad(n, "end outside an episode"))?;
                    if end.index != index {
                        return Err(bad(n, "end record index does not match its episode"));
                    }
                    episodes.push(TraceEpisode {
                        index,
                        seed,
                        world,
                        steps,
                        end,
                    });
                }
            }
        }
        if open.is_some() {
            return Err(Error::Trace("last episode has no end record".into()));
        }
        let config = config.ok_or_else(|| Error::Trace("no run record".into()))?;
        Ok(Trace { config, episodes })
    }

    pub fn episode(&self, index: usize) -> Result<&TraceEpisode> {
        self.episodes
            .iter()
            .find(|e| e.index == index)
            .ok_or_else(|| Error::Trace(format!("episode {index} is not in the trace")))
    }
}
