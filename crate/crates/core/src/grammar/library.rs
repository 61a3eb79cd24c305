use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;

use super::hypothesis::{
    Hypothesis, HypothesisKind, KindMix, SemanticForm, TemplateId, TripletParts,
};
use super::template::{fill, match_pieces, Piece, Template};
use crate::error::{Error, Result};
use crate::EnvId;

/// Template corpus for one environment, plus its closed vocabulary.
///
/// Immutable once loaded.
#[derive(Debug, Clone)]
pub struct TemplateLibrary {
    env_id: EnvId,
    pre: Vec<Template>,
    action: Vec<Template>,
    post: Vec<Template>,
    general: Vec<Template>,
    special: Vec<Template>,
    slot_domains: BTreeMap<String, Vec<String>>,
    vocabulary: Vec<String>,
    index: HashMap<String, u32>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Pre,
    Action,
    Post,
    General,
    Special,
}

const COLORSWITCH: &str = include_str!("../../corpus/colorswitch.txt");
const PUSHBLOCK: &str = include_str!("../../corpus/pushblock.txt");
const CRAFTING: &str = include_str!("../../corpus/crafting.txt");
const CARTPOLE: &str = include_str!("../../corpus/cartpole.txt");

/// Raw text of the corpus shipped with the crate.
pub fn builtin_corpus(env: EnvId) -> &'static str {
    match env {
        EnvId::ColorSwitch => COLORSWITCH,
        EnvId::Pushblock => PUSHBLOCK,
        EnvId::Crafting => CRAFTING,
        EnvId::Cartpole => CARTPOLE,
    }
}

impl TemplateLibrary {
    /// Parses a corpus file.
    ///
    /// Lines `[PRE]`, `[ACTION]`, `[POST]`, `[GENERAL]`, `[SPECIAL]` and
    /// `[VALUES <SLOT>]` open sections; blank lines are ignored and every
    /// other line is a template or a slot value.
    pub fn load(env_id: EnvId, source: &str) -> Result<TemplateLibrary> {
        enum Target {
            Templates(Section),
            Values(String),
        }

        let mut sections: BTreeMap<u8, Vec<Template>> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        let mut slot_domains: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut target: Option<Target> = None;

        for (n, raw) in source.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Corpus { line: line_no, msg };
            if let Some(inner) = line.strip_prefix('[') {
                let inner = inner
                    .strip_suffix(']')
                    .ok_or_else(|| err(format!("malformed section header `{line}`")))?
                    .trim();
                if !seen.insert(inner.to_string()) {
                    return Err(err(format!("duplicate section `[{inner}]`")));
                }
                target = Some(match inner {
                    "PRE" => Target::Templates(Section::Pre),
                    "ACTION" => Target::Templates(Section::Action),
                    "POST" => Target::Templates(Section::Post),
                    "GENERAL" => Target::Templates(Section::General),
                    "SPECIAL" => Target::Templates(Section::Special),
                    other => match other.strip_prefix("VALUES ") {
                        Some(slot) if super::is_slot_marker(slot.trim()) => {
                            let slot = slot.trim().to_string();
                            slot_domains.entry(slot.clone()).or_default();
                            Target::Values(slot)
                        }
                        _ => return Err(err(format!("malformed section header `{line}`"))),
                    },
                });
                if let Some(Target::Templates(s)) = &target {
                    sections.entry(*s as u8).or_default();
                }
                continue;
            }
            match &target {
                None => return Err(err("content before the first section header".into())),
                Some(Target::Templates(s)) => {
                    sections
                        .entry(*s as u8)
                        .or_default()
                        .push(Template::new(line));
                }
                Some(Target::Values(slot)) => {
                    if line.split_whitespace().count() != 1 {
                        return Err(err(format!("slot value `{line}` is not a single token")));
                    }
                    let value = line.to_lowercase();
                    let domain = slot_domains.get_mut(slot).expect("opened above");
                    if !domain.contains(&value) {
                        domain.push(value);
                    }
                }
            }
        }

        let mut take = |s: Section| sections.remove(&(s as u8)).unwrap_or_default();
        let lib = TemplateLibrary {
            env_id,
            pre: take(Section::Pre),
            action: take(Section::Action),
            post: take(Section::Post),
            general: take(Section::General),
            special: take(Section::Special),
            slot_domains,
            vocabulary: Vec::new(),
            index: HashMap::new(),
        };
        lib.finish()
    }

    /// The corpus shipped with the crate for `env`.
    pub fn builtin(env: EnvId) -> TemplateLibrary {
        Self::load(env, builtin_corpus(env)).expect("shipped corpus is well formed")
    }

    fn finish(mut self) -> Result<TemplateLibrary> {
        for (name, section) in [
            ("PRE", &self.pre),
            ("ACTION", &self.action),
            ("POST", &self.post),
        ] {
            if section.is_empty() {
                return Err(Error::MissingSection {
                    env: self.env_id,
                    section: name,
                });
            }
        }
        let mut vocab = BTreeSet::new();
        for t in self.all_templates() {
            vocab.extend(t.words().map(str::to_string));
            for slot in t.slots() {
                match self.slot_domains.get(slot) {
                    Some(d) if !d.is_empty() => vocab.extend(d.iter().cloned()),
                    _ => return Err(Error::UndeclaredSlot(slot.to_string())),
                }
            }
        }
        self.vocabulary = vocab.into_iter().collect();
        self.index = self
            .vocabulary
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        Ok(self)
    }

    fn all_templates(&self) -> impl Iterator<Item = &Template> {
        self.pre
            .iter()
            .chain(&self.action)
            .chain(&self.post)
            .chain(&self.general)
            .chain(&self.special)
    }

    pub fn env_id(&self) -> EnvId {
        self.env_id
    }

    pub fn pre_templates(&self) -> &[Template] {
        &self.pre
    }

    pub fn action_templates(&self) -> &[Template] {
        &self.action
    }

    pub fn post_templates(&self) -> &[Template] {
        &self.post
    }

    pub fn general_templates(&self) -> &[Template] {
        &self.general
    }

    pub fn special_templates(&self) -> &[Template] {
        &self.special
    }

    pub fn slot_domains(&self) -> &BTreeMap<String, Vec<String>> {
        &self.slot_domains
    }

    pub fn domain(&self, slot: &str) -> &[String] {
        self.slot_domains
            .get(slot)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    /// Pieces of the template (or concatenated triple) behind `id`.
    pub fn pieces(&self, id: TemplateId) -> Option<Vec<&Piece>> {
        match id {
            TemplateId::Triplet(p) => {
                let pre = self.pre.get(p.pre)?;
                let act = self.action.get(p.action)?;
                let post = self.post.get(p.post)?;
                Some(
                    pre.pieces()
                        .iter()
                        .chain(act.pieces())
                        .chain(post.pieces())
                        .collect(),
                )
            }
            TemplateId::General(i) => Some(self.general.get(i)?.pieces().iter().collect()),
            TemplateId::Special(i) => Some(self.special.get(i)?.pieces().iter().collect()),
        }
    }

    /// Human-readable template text for `id` (slot markers left in place).
    pub fn template_text(&self, id: TemplateId) -> Option<String> {
        let pieces = self.pieces(id)?;
        Some(
            pieces
                .iter()
                .map(|p| match p {
                    Piece::Word(w) | Piece::Slot(w) => w.as_str(),
                })
                .collect::<Vec<_>>()
                .join(" "),
        )
    }

    fn slot_order(&self, id: TemplateId) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in self.pieces(id).unwrap_or_default() {
            if let Piece::Slot(s) = p {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Renders a semantic form to a hypothesis.
    pub fn instantiate(&self, form: &SemanticForm) -> Result<Hypothesis> {
        let pieces = self
            .pieces(form.template_id)
            .ok_or_else(|| Error::NoMatch(form.template_id.to_string()))?;
        for slot in self.slot_order(form.template_id) {
            let value = form
                .slots
                .get(&slot)
                .ok_or_else(|| Error::UndeclaredSlot(slot.clone()))?;
            if !self.domain(&slot).contains(value) {
                return Err(Error::OutOfVocabulary(value.clone()));
            }
        }
        let words = fill(pieces, &form.slots).expect("slots checked above");
        let text = words.join(" ");
        let tokens = self.tokenize(&text)?;
        Ok(Hypothesis {
            text,
            tokens,
            form: form.clone(),
        })
    }

    fn ids(&self, kind: HypothesisKind) -> Vec<TemplateId> {
        match kind {
            HypothesisKind::Triplet => {
                let mut v = Vec::new();
                for pre in 0..self.pre.len() {
                    for action in 0..self.action.len() {
                        for post in 0..self.post.len() {
                            v.push(TemplateId::Triplet(TripletParts { pre, action, post }));
                        }
                    }
                }
                v
            }
            HypothesisKind::General => (0..self.general.len()).map(TemplateId::General).collect(),
            HypothesisKind::Special => (0..self.special.len()).map(TemplateId::Special).collect(),
        }
    }

    /// Every template id of the given kind.
    pub fn template_ids(&self, kind: HypothesisKind) -> Vec<TemplateId> {
        self.ids(kind)
    }

    /// All parses of `text`. Triplet texts decompose into their three parts.
    pub fn parse_all(&self, text: &str) -> Vec<SemanticForm> {
        let lowered = text.to_lowercase();
        let tokens: Vec<&str> = lowered.split_whitespace().collect();
        let mut out = Vec::new();
        for kind in [
            HypothesisKind::Triplet,
            HypothesisKind::General,
            HypothesisKind::Special,
        ] {
            for id in self.ids(kind) {
                let pieces = self.pieces(id).expect("id from ids()");
                if let Some(slots) = match_pieces(&pieces, &tokens, &self.slot_domains) {
                    out.push(SemanticForm {
                        template_id: id,
                        slots,
                    });
                }
            }
        }
        out
    }

    /// The unique semantic form whose instantiation equals `text`.
    pub fn parse(&self, text: &str) -> Result<SemanticForm> {
        let mut all = self.parse_all(text);
        match all.len() {
            0 => Err(Error::NoMatch(text.to_string())),
            1 => Ok(all.pop().expect("len 1")),
            _ => Err(Error::Ambiguous {
                text: text.to_string(),
                candidates: all.iter().map(|f| f.template_id.to_string()).collect(),
            }),
        }
    }

    /// Lowercase whitespace split, mapped through the vocabulary.
    pub fn tokenize(&self, text: &str) -> Result<Vec<u32>> {
        text.split_whitespace()
            .map(|w| {
                let w = w.to_lowercase();
                self.index.get(&w).copied().ok_or(Error::OutOfVocabulary(w))
            })
            .collect()
    }

    pub fn detokenize(&self, tokens: &[u32]) -> Result<String> {
        let words = tokens
            .iter()
            .map(|&t| {
                self.vocabulary
                    .get(t as usize)
                    .map(String::as_str)
                    .ok_or(Error::BadTokenIndex(t))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(words.join(" "))
    }

    fn fill_random<R: Rng + ?Sized>(&self, id: TemplateId, rng: &mut R) -> Hypothesis {
        let slots = self
            .slot_order(id)
            .into_iter()
            .map(|s| {
                let v = self
                    .domain(&s)
                    .choose(rng)
                    .expect("domains are non-empty")
                    .clone();
                (s, v)
            })
            .collect();
        self.instantiate(&SemanticForm {
            template_id: id,
            slots,
        })
        .expect("random fill stays inside the library")
    }

    /// Draws one pre, one action and one post template independently, then
    /// fills every slot uniformly.
    pub fn sample_triplet<R: Rng + ?Sized>(&self, rng: &mut R) -> Hypothesis {
        let parts = TripletParts {
            pre: rng.gen_range(0..self.pre.len()),
            action: rng.gen_range(0..self.action.len()),
            post: rng.gen_range(0..self.post.len()),
        };
        self.fill_random(TemplateId::Triplet(parts), rng)
    }

    /// Draws uniformly over the general and special templates.
    pub fn sample_general<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Hypothesis> {
        let n = self.general.len() + self.special.len();
        if n == 0 {
            return Err(Error::MissingSection {
                env: self.env_id,
                section: "GENERAL",
            });
        }
        let i = rng.gen_range(0..n);
        let id = if i < self.general.len() {
            TemplateId::General(i)
        } else {
            TemplateId::Special(i - self.general.len())
        };
        Ok(self.fill_random(id, rng))
    }

    /// Draws a hypothesis kind from `mix`, then a hypothesis of that kind.
    pub fn sample<R: Rng + ?Sized>(&self, mix: KindMix, rng: &mut R) -> Result<Hypothesis> {
        let u: f64 = rng.gen();
        if u < mix.triplet_fraction() {
            Ok(self.sample_triplet(rng))
        } else {
            self.sample_general(rng)
        }
    }

    /// Number of distinct instantiations of the given kind.
    pub fn count_instantiations(&self, kind: HypothesisKind) -> usize {
        self.ids(kind)
            .into_iter()
            .map(|id| {
                self.slot_order(id)
                    .iter()
                    .map(|s| self.domain(s).len())
                    .product::<usize>()
            })
            .sum()
    }

    /// Every semantic form of the given kind, in template then slot order.
    pub fn enumerate(&self, kind: HypothesisKind) -> impl Iterator<Item = SemanticForm> + '_ {
        self.ids(kind).into_iter().flat_map(move |id| {
            let order = self.slot_order(id);
            let mut forms: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
            for slot in &order {
                forms = forms
                    .into_iter()
                    .flat_map(|partial| {
                        self.domain(slot).iter().map(move |v| {
                            let mut next = partial.clone();
                            next.insert(slot.clone(), v.clone());
                            next
                        })
                    })
                    .collect();
            }
            forms.into_iter().map(move |slots| SemanticForm {
                template_id: id,
                slots,
            })
        })
    }
}
