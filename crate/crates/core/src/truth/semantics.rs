use super::{
    ActionSeq, Claim, Condition, EffectKind, GravityChange, Missing, Triplet, WindDirection,
    ZoneEffect,
};
use crate::error::{Error, Result};
use crate::grammar::{SemanticForm, TemplateId, TemplateLibrary};
use crate::{Action, EnvId};

/// How a non-triplet template relates its slots to the world law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Plain causal statement built from the slots.
    Causal,
    /// Causal statement with the state-like slot complemented.
    Complemented,
    /// The effect does not follow.
    NegatedEffect,
    /// The named entity has no influence on the effect.
    Independent(Option<EffectKind>),
    /// The named entity drives the effect, polarity unstated.
    Controls,
    MissingIngredient,
    MissingLocation,
}

/// Templates whose meaning is not the plain causal reading of their slots.
const RULES: &[(EnvId, &str, Rule)] = &[
    (EnvId::ColorSwitch, "if you see COLOR switch then the door is open", Rule::Controls),
    (EnvId::ColorSwitch, "the COLOR switch is what controls the door", Rule::Controls),
    (EnvId::ColorSwitch, "the door is independent of the COLOR switch", Rule::Independent(None)),
    (
        EnvId::ColorSwitch,
        "whether the door is open is completely independent of the COLOR switch",
        Rule::Independent(None),
    ),
    (
        EnvId::ColorSwitch,
        "if the door is not open then the COLOR switch must be ON_OFF_SWITCHSTATE",
        Rule::Complemented,
    ),
    (
        EnvId::ColorSwitch,
        "if the COLOR switch is not ON_OFF_SWITCHSTATE then the door is open",
        Rule::Complemented,
    ),
    (
        EnvId::ColorSwitch,
        "a not ON_OFF_SWITCHSTATE COLOR switch opens the door",
        Rule::Complemented,
    ),
    // "closed ⇒ not STATE" is the contrapositive of "STATE ⇒ open".
    (
        EnvId::ColorSwitch,
        "to make the door not open the COLOR switch must be not ON_OFF_SWITCHSTATE",
        Rule::Causal,
    ),
    (
        EnvId::Pushblock,
        "the pushblock being at the PUSHBLOCK_POSITION is completely independent of the door",
        Rule::Independent(None),
    ),
    (
        EnvId::Pushblock,
        "the pushblock being PUSHBLOCK_POSITION is independent of the door being open",
        Rule::Independent(None),
    ),
    (
        EnvId::Pushblock,
        "the door state is independent of pushblock PUSHBLOCK_POSITION",
        Rule::Independent(None),
    ),
    (
        EnvId::Pushblock,
        "PUSHBLOCK_POSITION pushblock and door are independent",
        Rule::Independent(None),
    ),
    (
        EnvId::Crafting,
        "if you are at LOCATION and do CRAFTING_ACTION you make CREATED_ITEM",
        Rule::MissingIngredient,
    ),
    (
        EnvId::Crafting,
        "CREATED_ITEM is created by being at LOCATION and doing CRAFTING_ACTION",
        Rule::MissingIngredient,
    ),
    (
        EnvId::Crafting,
        "LOCATION plus CRAFTING_ACTION creates a CREATED_ITEM",
        Rule::MissingIngredient,
    ),
    (
        EnvId::Crafting,
        "if you are anywhere and do CRAFTING_ACTION with CRAFTING_ITEM you make a CREATED_ITEM",
        Rule::MissingLocation,
    ),
    (
        EnvId::Crafting,
        "make a CREATED_ITEM by having a CRAFTING_ITEM and doing CRAFTING_ACTION",
        Rule::MissingLocation,
    ),
    (
        EnvId::Crafting,
        "with a CRAFTING_ITEM you can make a CREATED_ITEM by doing CRAFTING_ACTION",
        Rule::MissingLocation,
    ),
    (
        EnvId::Crafting,
        "having CRAFTING_ITEM at LOCATION and doing CRAFTING_ACTION does not make a CREATED_ITEM",
        Rule::NegatedEffect,
    ),
    (
        EnvId::Crafting,
        "you have CRAFTING_ITEM and go to LOCATION and CRAFTING_ACTION and CREATED_ITEM will not be created",
        Rule::NegatedEffect,
    ),
    (
        EnvId::Cartpole,
        "gravity is totally independent of COLOR",
        Rule::Independent(Some(EffectKind::Gravity)),
    ),
    (
        EnvId::Cartpole,
        "COLOR zone does not effect gravity it is independent",
        Rule::Independent(Some(EffectKind::Gravity)),
    ),
    (
        EnvId::Cartpole,
        "the wind is completely independent of the COLOR zone",
        Rule::Independent(Some(EffectKind::Wind)),
    ),
    (
        EnvId::Cartpole,
        "independent of wind DIRECTION is COLOR",
        Rule::Independent(Some(EffectKind::Wind)),
    ),
    (
        EnvId::Cartpole,
        "gravity is changed by being in COLOR but not MULTIPLIER",
        Rule::Complemented,
    ),
    (
        EnvId::Cartpole,
        "the effect of being in COLOR is opposite to gravity MULTIPLIER",
        Rule::Complemented,
    ),
    (
        EnvId::Cartpole,
        "the wind blows opposite of DIRECTION when in COLOR zone",
        Rule::Complemented,
    ),
    (
        EnvId::Cartpole,
        "being in COLOR causes the wind to blow opposite to DIRECTION",
        Rule::Complemented,
    ),
];

pub(crate) fn rule_for(env: EnvId, template_text: &str) -> Rule {
    RULES
        .iter()
        .find(|(e, t, _)| *e == env && *t == template_text)
        .map(|&(_, _, r)| r)
        .unwrap_or(Rule::Causal)
}

struct Slots<'a> {
    form: &'a SemanticForm,
    text: String,
}

impl Slots<'_> {
    fn get(&self, name: &str) -> Result<&str> {
        self.form
            .slot(name)
            .ok_or_else(|| Error::UndefinedSemantics(self.text.clone()))
    }

    fn has(&self, name: &str) -> bool {
        self.form.slots.contains_key(name)
    }
}

fn parse_on(v: &str) -> Result<bool> {
    match v {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(Error::UndefinedSemantics(v.to_string())),
    }
}

fn parse_effect(s: &Slots<'_>) -> Result<ZoneEffect> {
    if s.has("MULTIPLIER") {
        match s.get("MULTIPLIER")? {
            "decreased" => Ok(ZoneEffect::Gravity(GravityChange::Decreased)),
            "increased" => Ok(ZoneEffect::Gravity(GravityChange::Increased)),
            v => Err(Error::UndefinedSemantics(v.to_string())),
        }
    } else {
        match s.get("DIRECTION")? {
            "left" => Ok(ZoneEffect::Wind(WindDirection::Left)),
            "right" => Ok(ZoneEffect::Wind(WindDirection::Right)),
            v => Err(Error::UndefinedSemantics(v.to_string())),
        }
    }
}

fn craft_action(v: &str) -> Result<Action> {
    match v {
        "craft" => Ok(Action::Craft),
        _ => Err(Error::UndefinedSemantics(v.to_string())),
    }
}

/// The full causal reading of a form's slots for its environment.
fn causal(env: EnvId, s: &Slots<'_>, complement: bool) -> Result<Triplet> {
    Ok(match env {
        EnvId::ColorSwitch => {
            let on = parse_on(s.get("ON_OFF_SWITCHSTATE")?)?;
            Triplet {
                pre: Condition::SwitchIs {
                    color: s.get("COLOR")?.to_string(),
                    on: on != complement,
                },
                action: ActionSeq::Empty,
                post: Condition::DoorOpen,
            }
        }
        EnvId::Pushblock => {
            if complement {
                return Err(Error::UndefinedSemantics(s.text.clone()));
            }
            Triplet {
                pre: Condition::BlockIn(s.get("PUSHBLOCK_POSITION")?.parse()?),
                action: ActionSeq::Empty,
                post: Condition::DoorOpen,
            }
        }
        EnvId::Crafting => {
            if complement {
                return Err(Error::UndefinedSemantics(s.text.clone()));
            }
            Triplet {
                pre: Condition::All(vec![
                    Condition::At(s.get("LOCATION")?.to_string()),
                    Condition::Has(s.get("CRAFTING_ITEM")?.to_string()),
                ]),
                action: ActionSeq::Do(craft_action(s.get("CRAFTING_ACTION")?)?),
                post: Condition::Has(s.get("CREATED_ITEM")?.to_string()),
            }
        }
        EnvId::Cartpole => {
            let effect = parse_effect(s)?;
            Triplet {
                pre: Condition::InZone(s.get("COLOR")?.to_string()),
                action: ActionSeq::Empty,
                post: Condition::Effect(if complement {
                    effect.opposite()
                } else {
                    effect
                }),
            }
        }
    })
}

fn cause_and_effect(
    env: EnvId,
    s: &Slots<'_>,
    kind: Option<EffectKind>,
) -> Result<(Condition, Condition)> {
    Ok(match env {
        EnvId::ColorSwitch => (
            Condition::SwitchIs {
                color: s.get("COLOR")?.to_string(),
                on: true,
            },
            Condition::DoorOpen,
        ),
        EnvId::Pushblock => (
            Condition::BlockIn(s.get("PUSHBLOCK_POSITION")?.parse()?),
            Condition::DoorOpen,
        ),
        EnvId::Cartpole => {
            let kind = match kind {
                Some(k) => k,
                None => parse_effect(s)?.kind(),
            };
            (
                Condition::InZone(s.get("COLOR")?.to_string()),
                Condition::EffectOfKind(kind),
            )
        }
        EnvId::Crafting => return Err(Error::UndefinedSemantics(s.text.clone())),
    })
}

/// Maps a parsed hypothesis to its claim about the world law.
pub fn interpret(lib: &TemplateLibrary, form: &SemanticForm) -> Result<Claim> {
    let env = lib.env_id();
    let text = lib
        .template_text(form.template_id)
        .ok_or_else(|| Error::NoMatch(form.template_id.to_string()))?;
    let slots = Slots { form, text };
    if let TemplateId::Triplet(_) = form.template_id {
        return Ok(Claim::Implies(causal(env, &slots, false)?));
    }
    match rule_for(env, &slots.text) {
        Rule::Causal => Ok(Claim::Implies(causal(env, &slots, false)?)),
        Rule::Complemented => Ok(Claim::Implies(causal(env, &slots, true)?)),
        Rule::NegatedEffect => Ok(Claim::NotImplies(causal(env, &slots, false)?)),
        Rule::Independent(kind) => {
            let (cause, effect) = cause_and_effect(env, &slots, kind)?;
            Ok(Claim::Independent { cause, effect })
        }
        Rule::Controls => {
            let (cause, effect) = cause_and_effect(env, &slots, None)?;
            Ok(Claim::Controls { cause, effect })
        }
        Rule::MissingIngredient => Ok(Claim::Partial {
            known: Triplet {
                pre: Condition::At(slots.get("LOCATION")?.to_string()),
                action: ActionSeq::Do(craft_action(slots.get("CRAFTING_ACTION")?)?),
                post: Condition::Has(slots.get("CREATED_ITEM")?.to_string()),
            },
            missing: Missing::Ingredient,
        }),
        Rule::MissingLocation => Ok(Claim::Partial {
            known: Triplet {
                pre: Condition::Has(slots.get("CRAFTING_ITEM")?.to_string()),
                action: ActionSeq::Do(craft_action(slots.get("CRAFTING_ACTION")?)?),
                post: Condition::Has(slots.get("CREATED_ITEM")?.to_string()),
            },
            missing: Missing::Location,
        }),
    }
}
