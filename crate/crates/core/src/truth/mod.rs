//! Condition predicates, hypothesis semantics, the ground-truth function and
//! an independent simulation oracle.

mod evidence;
mod ground;
mod semantics;
mod simulate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::episode::{Frame, WorldState};
use crate::error::{Error, Result};
use crate::Action;

pub use evidence::{Basis, Judge, Verdict, ACCEL_TOLERANCE, MIN_ZONE_STEPS};
pub use ground::{ground_truth, ground_truth_form};
pub use semantics::{interpret, Rule};
pub(crate) use simulate::{key as grid_key, GridKey};
pub use simulate::{truth_by_simulation, Exploration, PROBE_STEPS, SIMULATION_BUDGET};

/// Block target regions: the two outermost rows or columns on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Left,
    Right,
    Top,
    Bottom,
}

impl Region {
    pub const ALL: [Region; 4] = [Region::Left, Region::Right, Region::Top, Region::Bottom];

    pub fn contains(self, (row, col): (usize, usize), size: usize) -> bool {
        match self {
            Region::Top => row < 2,
            Region::Bottom => row + 2 >= size,
            Region::Left => col < 2,
            Region::Right => col + 2 >= size,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::Left => "left",
            Region::Right => "right",
            Region::Top => "top",
            Region::Bottom => "bottom",
        }
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Region::Left),
            "right" => Ok(Region::Right),
            "top" | "up" => Ok(Region::Top),
            "bottom" | "down" => Ok(Region::Bottom),
            _ => Err(Error::UndefinedSemantics(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GravityChange {
    Decreased,
    Increased,
}

impl GravityChange {
    pub fn factor(self) -> f64 {
        match self {
            GravityChange::Decreased => 0.5,
            GravityChange::Increased => 2.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            GravityChange::Decreased => GravityChange::Increased,
            GravityChange::Increased => GravityChange::Decreased,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindDirection {
    Left,
    Right,
}

impl WindDirection {
    pub fn sign(self) -> f64 {
        match self {
            WindDirection::Left => -1.0,
            WindDirection::Right => 1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            WindDirection::Left => WindDirection::Right,
            WindDirection::Right => WindDirection::Left,
        }
    }
}

/// Physics modification applied inside the causal cartpole zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZoneEffect {
    Gravity(GravityChange),
    Wind(WindDirection),
}

impl ZoneEffect {
    pub const ALL: [ZoneEffect; 4] = [
        ZoneEffect::Gravity(GravityChange::Decreased),
        ZoneEffect::Gravity(GravityChange::Increased),
        ZoneEffect::Wind(WindDirection::Left),
        ZoneEffect::Wind(WindDirection::Right),
    ];

    pub fn kind(self) -> EffectKind {
        match self {
            ZoneEffect::Gravity(_) => EffectKind::Gravity,
            ZoneEffect::Wind(_) => EffectKind::Wind,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            ZoneEffect::Gravity(g) => ZoneEffect::Gravity(g.opposite()),
            ZoneEffect::Wind(w) => ZoneEffect::Wind(w.opposite()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EffectKind {
    Gravity,
    Wind,
}

/// Boolean predicate over a single world state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    SwitchIs {
        color: String,
        on: bool,
    },
    DoorOpen,
    BlockIn(Region),
    /// Agent stands on the named crafting location.
    At(String),
    /// Inventory holds at least one of the item.
    Has(String),
    InZone(String),
    /// The cart currently feels exactly this modification.
    Effect(ZoneEffect),
    /// The cart currently feels some modification of this kind.
    EffectOfKind(EffectKind),
    All(Vec<Condition>),
}

impl Condition {
    /// The entity whose state this condition reads, if any single one.
    pub fn subject(&self) -> Option<Subject<'_>> {
        match self {
            Condition::SwitchIs { color, .. } => Some(Subject::Switch(color)),
            Condition::BlockIn(r) => Some(Subject::Block(*r)),
            Condition::InZone(c) => Some(Subject::Zone(c)),
            Condition::DoorOpen => Some(Subject::Door),
            Condition::Effect(e) => Some(Subject::Physics(e.kind())),
            Condition::EffectOfKind(k) => Some(Subject::Physics(*k)),
            Condition::At(l) => Some(Subject::Location(l)),
            Condition::Has(i) => Some(Subject::Item(i)),
            Condition::All(_) => None,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::SwitchIs { color, on } => {
                write!(f, "switch({color})={}", if *on { "on" } else { "off" })
            }
            Condition::DoorOpen => f.write_str("door=open"),
            Condition::BlockIn(r) => write!(f, "block-in({})", r.name()),
            Condition::At(l) => write!(f, "at({l})"),
            Condition::Has(i) => write!(f, "has({i})"),
            Condition::InZone(c) => write!(f, "in-zone({c})"),
            Condition::Effect(e) => write!(f, "effect({e:?})"),
            Condition::EffectOfKind(k) => write!(f, "effect-kind({k:?})"),
            Condition::All(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                f.write_str(&parts.join(" & "))
            }
        }
    }
}

/// What a condition is "about", used to compare entities across claims and laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subject<'a> {
    Switch(&'a str),
    Block(Region),
    Zone(&'a str),
    Door,
    Physics(EffectKind),
    Location(&'a str),
    Item(&'a str),
}

/// Predicate over a (state, action) sequence. Every action template in the
/// corpus is either empty or a single named action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionSeq {
    Empty,
    Do(Action),
}

impl ActionSeq {
    /// Whether the transition `(prev, action, next)` executes the sequence.
    pub fn executed_by(self, action: Option<Action>) -> bool {
        match self {
            ActionSeq::Empty => true,
            ActionSeq::Do(a) => action == Some(a),
        }
    }
}

/// (pre-condition, action sequence) ⇒ post-condition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triplet {
    pub pre: Condition,
    pub action: ActionSeq,
    pub post: Condition,
}

/// Which part of a recipe a partial crafting claim leaves unstated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Missing {
    Ingredient,
    Location,
}

/// The meaning of a hypothesis, independent of its wording.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Implies(Triplet),
    NotImplies(Triplet),
    /// `cause` has no causal influence on `effect`.
    Independent {
        cause: Condition,
        effect: Condition,
    },
    /// `cause` is what drives `effect`, polarity unstated.
    Controls {
        cause: Condition,
        effect: Condition,
    },
    /// A recipe with one component unstated; `known.pre` holds the rest.
    Partial {
        known: Triplet,
        missing: Missing,
    },
}

impl Claim {
    pub fn triplet(&self) -> Option<&Triplet> {
        match self {
            Claim::Implies(t) | Claim::NotImplies(t) => Some(t),
            Claim::Partial { known, .. } => Some(known),
            _ => None,
        }
    }

    /// Every condition the claim mentions, flattened.
    pub fn conditions(&self) -> Vec<&Condition> {
        fn flatten<'a>(c: &'a Condition, out: &mut Vec<&'a Condition>) {
            match c {
                Condition::All(cs) => cs.iter().for_each(|c| flatten(c, out)),
                other => out.push(other),
            }
        }
        let mut out = Vec::new();
        match self {
            Claim::Implies(t) | Claim::NotImplies(t) | Claim::Partial { known: t, .. } => {
                flatten(&t.pre, &mut out);
                flatten(&t.post, &mut out);
            }
            Claim::Independent { cause, effect } | Claim::Controls { cause, effect } => {
                flatten(cause, &mut out);
                flatten(effect, &mut out);
            }
        }
        out
    }
}

/// Evaluates `cond` on `state`.
pub fn eval_condition(cond: &Condition, state: &WorldState) -> Result<bool> {
    match (cond, state) {
        (Condition::All(cs), _) => {
            let mut all = true;
            for c in cs {
                all &= eval_condition(c, state)?;
            }
            Ok(all)
        }
        (_, WorldState::Grid(g)) => g.eval(cond),
        (_, WorldState::Cart(c)) => c.eval(cond),
    }
}

/// True iff `cond` takes different values on some consecutive pair of frames.
pub fn condition_changed(cond: &Condition, window: &[Frame]) -> Result<bool> {
    let mut prev: Option<bool> = None;
    for frame in window {
        let v = eval_condition(cond, &frame.state)?;
        if prev.is_some_and(|p| p != v) {
            return Ok(true);
        }
        prev = Some(v);
    }
    Ok(false)
}
