use rand::{Rng, RngCore};

use super::AgentVerdict;
use crate::episode::Frame;
use crate::error::Result;
use crate::grammar::{Hypothesis, TemplateLibrary};
use crate::truth::{interpret, Basis, Claim, Judge, Verdict};

/// Answers from the last `K + 1` frames when they settle the hypothesis,
/// otherwise reports unknown. Sees only the frames and the hypothesis text.
#[derive(Debug, Clone)]
pub struct OraclePredictor<'a> {
    lib: &'a TemplateLibrary,
    claim: Claim,
}

impl<'a> OraclePredictor<'a> {
    pub fn new(lib: &'a TemplateLibrary, hypothesis: &Hypothesis) -> Result<Self> {
        let form = lib.parse(&hypothesis.text)?;
        Ok(OraclePredictor {
            lib,
            claim: interpret(lib, &form)?,
        })
    }

    pub fn claim(&self) -> &Claim {
        &self.claim
    }

    pub fn predict(&self, window: &[Frame]) -> Result<AgentVerdict> {
        let mut judge = Judge::new(self.lib, &self.claim);
        for frame in window {
            judge.state(&frame.state)?;
        }
        for pair in window.windows(2) {
            if let Some(action) = pair[1].action {
                judge.transition(&pair[0].state, action, &pair[1].state)?;
            }
        }
        Ok(judge.verdict())
    }
}

/// Label-blind fair coin.
#[derive(Debug, Clone, Copy, Default)]
pub struct CoinPredictor;

impl CoinPredictor {
    pub fn predict(&self, rng: &mut dyn RngCore) -> AgentVerdict {
        Verdict {
            answer: Some(rng.gen_bool(0.5)),
            basis: Some(Basis {
                rule: "prior",
                at: 0,
            }),
        }
    }
}
