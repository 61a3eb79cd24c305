use serde::{Deserialize, Serialize};

use crate::grammar::TemplateLibrary;
use crate::truth::{ActionSeq, Condition, Region, Subject, Triplet, ZoneEffect};
use crate::{Action, EnvId};

/// The hidden causal rule of a world.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    /// The door is open exactly when this switch is in this position.
    Switch { color: String, on: bool },
    /// The door is open exactly when the block lies in this region.
    Block(Region),
    /// Doing `action` at `location` while holding `ingredient` adds `output`.
    Recipe {
        ingredient: String,
        location: String,
        action: Action,
        output: String,
    },
    /// Inside the zone of this color the cart feels `effect`.
    Zone { color: String, effect: ZoneEffect },
}

impl Law {
    pub fn env(&self) -> EnvId {
        match self {
            Law::Switch { .. } => EnvId::ColorSwitch,
            Law::Block(_) => EnvId::Pushblock,
            Law::Recipe { .. } => EnvId::Crafting,
            Law::Zone { .. } => EnvId::Cartpole,
        }
    }

    /// The law stated as a causal triplet.
    pub fn triplet(&self) -> Triplet {
        match self {
            Law::Switch { color, on } => Triplet {
                pre: Condition::SwitchIs {
                    color: color.clone(),
                    on: *on,
                },
                action: ActionSeq::Empty,
                post: Condition::DoorOpen,
            },
            Law::Block(r) => Triplet {
                pre: Condition::BlockIn(*r),
                action: ActionSeq::Empty,
                post: Condition::DoorOpen,
            },
            Law::Recipe {
                ingredient,
                location,
                action,
                output,
            } => Triplet {
                pre: Condition::All(vec![
                    Condition::At(location.clone()),
                    Condition::Has(ingredient.clone()),
                ]),
                action: ActionSeq::Do(*action),
                post: Condition::Has(output.clone()),
            },
            Law::Zone { color, effect } => Triplet {
                pre: Condition::InZone(color.clone()),
                action: ActionSeq::Empty,
                post: Condition::Effect(*effect),
            },
        }
    }

    pub fn cause_subject(&self) -> Subject<'_> {
        match self {
            Law::Switch { color, .. } => Subject::Switch(color),
            Law::Block(r) => Subject::Block(*r),
            Law::Recipe { ingredient, .. } => Subject::Item(ingredient),
            Law::Zone { color, .. } => Subject::Zone(color),
        }
    }

    pub fn effect_subject(&self) -> Subject<'_> {
        match self {
            Law::Switch { .. } | Law::Block(_) => Subject::Door,
            Law::Recipe { output, .. } => Subject::Item(output),
            Law::Zone { effect, .. } => Subject::Physics(effect.kind()),
        }
    }

    /// Whether a claim condition can be evaluated against this kind of law.
    pub(crate) fn speaks_about(&self, cond: &Condition) -> bool {
        use Condition::*;
        match (self, cond) {
            (_, All(cs)) => cs.iter().all(|c| self.speaks_about(c)),
            (Law::Switch { .. }, SwitchIs { .. } | DoorOpen) => true,
            (Law::Block(_), BlockIn(_) | DoorOpen) => true,
            (Law::Recipe { .. }, At(_) | Has(_)) => true,
            (Law::Zone { .. }, InZone(_) | Effect(_) | EffectOfKind(_)) => true,
            _ => false,
        }
    }

    /// Every law expressible with the library's slot values.
    pub fn enumerate(lib: &TemplateLibrary) -> Vec<Law> {
        let d = |s: &str| lib.domain(s).to_vec();
        match lib.env_id() {
            EnvId::ColorSwitch => d("COLOR")
                .into_iter()
                .flat_map(|color| {
                    [true, false].map(|on| Law::Switch {
                        color: color.clone(),
                        on,
                    })
                })
                .collect(),
            EnvId::Pushblock => d("PUSHBLOCK_POSITION")
                .iter()
                .filter_map(|v| v.parse().ok())
                .map(Law::Block)
                .collect(),
            EnvId::Crafting => {
                let mut out = Vec::new();
                for ingredient in d("CRAFTING_ITEM") {
                    for location in d("LOCATION") {
                        for output in d("CREATED_ITEM") {
                            out.push(Law::Recipe {
                                ingredient: ingredient.clone(),
                                location: location.clone(),
                                action: Action::Craft,
                                output: output.clone(),
                            });
                        }
                    }
                }
                out
            }
            EnvId::Cartpole => {
                let mut effects = Vec::new();
                for m in d("MULTIPLIER") {
                    match m.as_str() {
                        "decreased" => effects
                            .push(ZoneEffect::Gravity(crate::truth::GravityChange::Decreased)),
                        "increased" => effects
                            .push(ZoneEffect::Gravity(crate::truth::GravityChange::Increased)),
                        _ => {}
                    }
                }
                for w in d("DIRECTION") {
                    match w.as_str() {
                        "left" => effects.push(ZoneEffect::Wind(crate::truth::WindDirection::Left)),
                        "right" => {
                            effects.push(ZoneEffect::Wind(crate::truth::WindDirection::Right))
                        }
                        _ => {}
                    }
                }
                d("COLOR")
                    .into_iter()
                    .flat_map(|color| {
                        effects
                            .iter()
                            .map(move |&effect| Law::Zone {
                                color: color.clone(),
                                effect,
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect()
            }
        }
    }
}

/// Something that can be spawned into a world.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entity {
    Switch(String),
    Block,
    Door,
    Item(String),
    Station(String),
    Zone(String),
}

impl Entity {
    pub fn name(&self) -> String {
        match self {
            Entity::Switch(c) => format!("{c} switch"),
            Entity::Block => "pushblock".into(),
            Entity::Door => "door".into(),
            Entity::Item(i) => i.clone(),
            Entity::Station(s) => s.clone(),
            Entity::Zone(c) => format!("{c} zone"),
        }
    }
}

/// The hidden world law `L_W` plus the inert entities spawned alongside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    pub env_id: EnvId,
    pub law: Law,
    pub decoys: Vec<Entity>,
}

impl RuleSet {
    pub fn new(law: Law) -> RuleSet {
        RuleSet {
            env_id: law.env(),
            law,
            decoys: Vec::new(),
        }
    }

    /// The entity the law makes causal.
    pub fn causal_entity(&self) -> Entity {
        match &self.law {
            Law::Switch { color, .. } => Entity::Switch(color.clone()),
            Law::Block(_) => Entity::Block,
            Law::Recipe { ingredient, .. } => Entity::Item(ingredient.clone()),
            Law::Zone { color, .. } => Entity::Zone(color.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_spaces() {
        let n = |e| Law::enumerate(&TemplateLibrary::builtin(e)).len();
        assert_eq!(n(EnvId::ColorSwitch), 8);
        assert_eq!(n(EnvId::Pushblock), 4);
        assert_eq!(n(EnvId::Crafting), 10);
        assert_eq!(n(EnvId::Cartpole), 16);
    }
}
