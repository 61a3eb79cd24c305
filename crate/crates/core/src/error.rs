use std::io;

use thiserror::Error;

use crate::EnvId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("corpus line {line}: {msg}")]
    Corpus { line: usize, msg: String },

    #[error("template uses slot `{0}` which has no declared values")]
    UndeclaredSlot(String),

    #[error("{env} corpus is missing a required `[{section}]` section")]
    MissingSection { env: EnvId, section: &'static str },

    #[error("no template matches `{0}`")]
    NoMatch(String),

    #[error("`{text}` matches {} templates: {}", candidates.len(), candidates.join(", "))]
    Ambiguous {
        text: String,
        candidates: Vec<String>,
    },

    #[error("token `{0}` is not in the vocabulary")]
    OutOfVocabulary(String),

    #[error("token index {0} is out of range")]
    BadTokenIndex(u32),

    #[error("semantics of `{0}` are undefined for this environment")]
    UndefinedSemantics(String),

    #[error("hypothesis `{0}` cannot be realised as a world law")]
    Unsatisfiable(String),

    #[error("retry budget of {budget} exhausted while {what} (seed {seed})")]
    RetryBudget {
        what: &'static str,
        budget: usize,
        seed: u64,
    },

    #[error("cannot place {entities} entities on a {cells}-cell grid")]
    GridOverfull { entities: usize, cells: usize },

    #[error("entity `{0}` is absent from the world")]
    MissingEntity(String),

    #[error("condition and state belong to different environments")]
    EnvMismatch,

    #[error("simulation budget of {0} steps could not settle the hypothesis")]
    Indeterminate(usize),

    #[error("unknown action id {id} for {env}")]
    UnknownAction { env: EnvId, id: usize },

    #[error("action `{action}` is not available in {env}")]
    InvalidAction { env: EnvId, action: String },

    #[error("episode is already done")]
    EpisodeDone,

    #[error("pre-condition rewards need a triplet hypothesis")]
    NotTriplet,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("trace: {0}")]
    Trace(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
