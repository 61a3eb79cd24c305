//! Batch runs, trace files, accuracy tables and replay.

mod config;
mod crosstab;
mod replay;
mod runner;
mod trace;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grammar::{HypothesisKind, TemplateLibrary};
use crate::truth::interpret;
use crate::EnvId;

pub use config::RunConfig;
pub use crosstab::{crosstab, Cell, CrosstabReport, Outcome};
pub use replay::{replay, ReplaySummary};
pub use runner::{agent_rng, episode_seed, run_batch, run_episode};
pub use trace::{
    round_sig9, EndRecord, StepRecord, Trace, TraceEpisode, TraceWriter, TRACE_HEADER,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub env: EnvId,
    pub vocabulary: usize,
    /// Instantiations checked per hypothesis kind.
    pub instantiations: BTreeMap<String, usize>,
}

/// Checks every instantiation of a library: the text parses back to its
/// form and to no other, tokens round-trip, and the semantics are defined.
pub fn corpus_check(lib: &TemplateLibrary) -> Result<CorpusReport> {
    let mut instantiations = BTreeMap::new();
    for kind in [
        HypothesisKind::Triplet,
        HypothesisKind::General,
        HypothesisKind::Special,
    ] {
        let mut n = 0;
        for form in lib.enumerate(kind) {
            let h = lib.instantiate(&form)?;
            let parsed = lib.parse(&h.text)?;
            if parsed != form {
                return Err(Error::Ambiguous {
                    text: h.text,
                    candidates: vec![form.template_id.to_string(), parsed.template_id.to_string()],
                });
            }
            if lib.detokenize(&h.tokens)? != h.text {
                return Err(Error::NoMatch(h.text));
            }
            interpret(lib, &form)?;
            n += 1;
        }
        instantiations.insert(kind.name().to_string(), n);
    }
    Ok(CorpusReport {
        env: lib.env_id(),
        vocabulary: lib.vocabulary().len(),
        instantiations,
    })
}
