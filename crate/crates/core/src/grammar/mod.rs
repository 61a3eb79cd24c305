//! Template corpus, hypothesis instantiation, tokenization and parsing.

mod hypothesis;
mod library;
mod template;

pub use hypothesis::{Hypothesis, HypothesisKind, KindMix, SemanticForm, TemplateId, TripletParts};
pub use library::{builtin_corpus, TemplateLibrary};
pub use template::{is_slot_marker, Piece, Template};
