use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HypothesisKind {
    Triplet,
    General,
    Special,
}

impl HypothesisKind {
    pub fn name(self) -> &'static str {
        match self {
            HypothesisKind::Triplet => "triplet",
            HypothesisKind::General => "general",
            HypothesisKind::Special => "special",
        }
    }
}

impl fmt::Display for HypothesisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Indices into the pre, action and post sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripletParts {
    pub pre: usize,
    pub action: usize,
    pub post: usize,
}

/// Which template (or template triple) a hypothesis was instantiated from.
///
/// Renders as `triplet:P.A.Q`, `general:N` or `special:N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TemplateId {
    Triplet(TripletParts),
    General(usize),
    Special(usize),
}

impl TemplateId {
    pub fn kind(self) -> HypothesisKind {
        match self {
            TemplateId::Triplet(_) => HypothesisKind::Triplet,
            TemplateId::General(_) => HypothesisKind::General,
            TemplateId::Special(_) => HypothesisKind::Special,
        }
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemplateId::Triplet(p) => write!(f, "triplet:{}.{}.{}", p.pre, p.action, p.post),
            TemplateId::General(i) => write!(f, "general:{i}"),
            TemplateId::Special(i) => write!(f, "special:{i}"),
        }
    }
}

impl FromStr for TemplateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Trace(format!("malformed template id `{s}`"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let num = |x: &str| x.parse::<usize>().map_err(|_| bad());
        match kind {
            "triplet" => {
                let parts: Vec<&str> = rest.split('.').collect();
                if parts.len() != 3 {
                    return Err(bad());
                }
                Ok(TemplateId::Triplet(TripletParts {
                    pre: num(parts[0])?,
                    action: num(parts[1])?,
                    post: num(parts[2])?,
                }))
            }
            "general" => Ok(TemplateId::General(num(rest)?)),
            "special" => Ok(TemplateId::Special(num(rest)?)),
            _ => Err(bad()),
        }
    }
}

impl From<TemplateId> for String {
    fn from(id: TemplateId) -> String {
        id.to_string()
    }
}

impl TryFrom<String> for TemplateId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

/// Parsed meaning of a hypothesis: which template, and what fills each slot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SemanticForm {
    pub template_id: TemplateId,
    pub slots: BTreeMap<String, String>,
}

impl SemanticForm {
    pub fn kind(&self) -> HypothesisKind {
        self.template_id.kind()
    }

    pub fn triplet_parts(&self) -> Option<TripletParts> {
        match self.template_id {
            TemplateId::Triplet(p) => Some(p),
            _ => None,
        }
    }

    pub fn slot(&self, name: &str) -> Option<&str> {
        self.slots.get(name).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub text: String,
    pub tokens: Vec<u32>,
    pub form: SemanticForm,
}

impl Hypothesis {
    pub fn kind(&self) -> HypothesisKind {
        self.form.kind()
    }
}

/// Probability of drawing a triplet hypothesis; the remainder is spread
/// uniformly over the general and special templates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct KindMix {
    triplet: f64,
}

impl KindMix {
    pub const TRIPLET_ONLY: KindMix = KindMix { triplet: 1.0 };
    pub const EVEN: KindMix = KindMix { triplet: 0.5 };
    pub const NON_TRIPLET: KindMix = KindMix { triplet: 0.0 };

    pub fn new(triplet: f64) -> Result<KindMix, Error> {
        if (0.0..=1.0).contains(&triplet) {
            Ok(KindMix { triplet })
        } else {
            Err(Error::Config(format!(
                "triplet fraction {triplet} is outside [0, 1]"
            )))
        }
    }

    pub fn triplet_fraction(self) -> f64 {
        self.triplet
    }
}

impl Default for KindMix {
    fn default() -> Self {
        KindMix::TRIPLET_ONLY
    }
}

impl fmt::Display for KindMix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.triplet == 1.0 {
            f.write_str("triplet")
        } else if self.triplet == 0.5 {
            f.write_str("even")
        } else if self.triplet == 0.0 {
            f.write_str("nontriplet")
        } else {
            write!(f, "{}", self.triplet)
        }
    }
}

impl FromStr for KindMix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "triplet" => Ok(KindMix::TRIPLET_ONLY),
            "even" => Ok(KindMix::EVEN),
            "nontriplet" | "non-triplet" => Ok(KindMix::NON_TRIPLET),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("unknown hypothesis mix `{other}`")))
                .and_then(KindMix::new),
        }
    }
}

impl From<KindMix> for String {
    fn from(m: KindMix) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for KindMix {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}
