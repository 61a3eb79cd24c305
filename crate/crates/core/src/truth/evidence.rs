use std::collections::{BTreeMap, BTreeSet};

use super::{ActionSeq, Claim, Condition, Missing, Triplet, ZoneEffect};
use crate::cartpole::{modified, push_force, CartSnapshot, CartpoleParams};
use crate::episode::WorldState;
use crate::error::{Error, Result};
use crate::grammar::TemplateLibrary;
use crate::gridworld::GridState;
use crate::Action;

/// Largest acceleration residual still counted as a match.
pub const ACCEL_TOLERANCE: f64 = 1e-6;

/// In-zone transitions with a consistent effect needed before it counts.
pub const MIN_ZONE_STEPS: usize = 3;

/// Why a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Basis {
    pub rule: &'static str,
    /// Index of the observation (state or transition) that settled it.
    pub at: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Option<bool>,
    pub basis: Option<Basis>,
}

impl Verdict {
    pub const UNKNOWN: Verdict = Verdict {
        answer: None,
        basis: None,
    };
}

/// Accumulates observed states and transitions and reports whether they
/// settle a claim. Reads only what an observer of the states could see: it
/// never consults the hidden law or the cart's recorded effect.
#[derive(Debug, Clone)]
pub struct Judge<'a> {
    claim: &'a Claim,
    ingredients: BTreeSet<String>,
    params: CartpoleParams<f64>,
    zone_counts: BTreeMap<(String, Option<ZoneEffect>), usize>,
    found: Option<(bool, Basis)>,
    conflict: bool,
    seen: usize,
}

type Found = Option<(bool, &'static str)>;

fn held_ingredients<'s>(g: &'s GridState, ingredients: &BTreeSet<String>) -> BTreeSet<&'s str> {
    g.inventory
        .iter()
        .filter(|(k, &n)| n > 0 && ingredients.contains(*k))
        .map(|(k, _)| k.as_str())
        .collect()
}

fn produced<'s>(prev: &GridState, next: &'s GridState) -> Vec<&'s str> {
    next.inventory
        .iter()
        .filter(|(k, &n)| n > prev.held(k))
        .map(|(k, _)| k.as_str())
        .collect()
}

fn item_of(cond: &Condition) -> Option<&str> {
    match cond {
        Condition::Has(i) => Some(i),
        _ => None,
    }
}

/// `(location, ingredient, output)` of a crafting triplet.
fn recipe(t: &Triplet) -> Option<(Option<&str>, Option<&str>, &str)> {
    let output = item_of(&t.post)?;
    let parts: Vec<&Condition> = match &t.pre {
        Condition::All(cs) => cs.iter().collect(),
        c => vec![c],
    };
    let mut loc = None;
    let mut ing = None;
    for c in parts {
        match c {
            Condition::At(l) => loc = Some(l.as_str()),
            Condition::Has(i) => ing = Some(i.as_str()),
            _ => return None,
        }
    }
    Some((loc, ing, output))
}

impl<'a> Judge<'a> {
    pub fn new(lib: &TemplateLibrary, claim: &'a Claim) -> Judge<'a> {
        Judge {
            claim,
            ingredients: lib.domain("CRAFTING_ITEM").iter().cloned().collect(),
            params: CartpoleParams::classic(),
            zone_counts: BTreeMap::new(),
            found: None,
            conflict: false,
            seen: 0,
        }
    }

    fn record(&mut self, found: Found) {
        if let Some((answer, rule)) = found {
            match self.found {
                None => {
                    self.found = Some((
                        answer,
                        Basis {
                            rule,
                            at: self.seen,
                        },
                    ))
                }
                Some((a, _)) if a != answer => self.conflict = true,
                _ => {}
            }
        }
        self.seen += 1;
    }

    pub fn decided(&self) -> bool {
        self.found.is_some()
    }

    /// Two pieces of evidence disagreed. Never happens for sound rules.
    pub fn conflicted(&self) -> bool {
        self.conflict
    }

    pub fn verdict(&self) -> Verdict {
        match self.found {
            Some((a, b)) => Verdict {
                answer: Some(a),
                basis: Some(b),
            },
            None => Verdict::UNKNOWN,
        }
    }

    /// Evidence carried by a single state.
    pub fn state(&mut self, s: &WorldState) -> Result<()> {
        let found = match (self.claim, s) {
            (Claim::Implies(t), WorldState::Grid(g)) => implies_state(t, g)?,
            (Claim::NotImplies(t), WorldState::Grid(g)) => negate(implies_state(t, g)?),
            _ => None,
        };
        self.record(found);
        Ok(())
    }

    /// Evidence carried by `prev --action--> next`.
    pub fn transition(
        &mut self,
        prev: &WorldState,
        action: Action,
        next: &WorldState,
    ) -> Result<()> {
        let found = match (prev, next) {
            (WorldState::Grid(a), WorldState::Grid(b)) => self.grid_transition(a, action, b)?,
            (WorldState::Cart(a), WorldState::Cart(b)) => self.cart_transition(a, action, b),
            _ => return Err(Error::EnvMismatch),
        };
        self.record(found);
        Ok(())
    }

    fn grid_transition(&self, prev: &GridState, action: Action, next: &GridState) -> Result<Found> {
        Ok(match self.claim {
            Claim::Implies(t) => self.implies_transition(t, prev, action, next)?,
            Claim::NotImplies(t) => negate(self.implies_transition(t, prev, action, next)?),
            Claim::Independent { cause, effect } => independence(cause, effect, prev, next)?,
            Claim::Controls { cause, effect } => negate(independence(cause, effect, prev, next)?),
            Claim::Partial { known, missing } => {
                if action != Action::Craft {
                    return Ok(None);
                }
                let made = produced(prev, next);
                let Some(&out) = made.first() else {
                    return Ok(None);
                };
                let (loc, ing, want) =
                    recipe(known).ok_or_else(|| Error::UndefinedSemantics(format!("{known:?}")))?;
                match missing {
                    Missing::Ingredient => Some((
                        out == want && prev.station_here() == loc,
                        "production-reveals-recipe",
                    )),
                    Missing::Location => {
                        let held = held_ingredients(prev, &self.ingredients);
                        let ing = ing.unwrap_or_default();
                        if out != want || !held.contains(ing) {
                            Some((false, "production-contradicts"))
                        } else if held.len() == 1 {
                            Some((true, "sole-ingredient-produced"))
                        } else {
                            None
                        }
                    }
                }
            }
        })
    }

    fn implies_transition(
        &self,
        t: &Triplet,
        prev: &GridState,
        action: Action,
        next: &GridState,
    ) -> Result<Found> {
        match t.action {
            ActionSeq::Empty => {
                let (p0, p1) = (prev.eval(&t.pre)?, next.eval(&t.pre)?);
                let (q0, q1) = (prev.eval(&t.post)?, next.eval(&t.post)?);
                Ok((p0 != p1 && q0 != q1 && p0 == q0 && p1 == q1)
                    .then_some((true, "pre-and-post-toggle-together")))
            }
            ActionSeq::Do(a) => {
                if action != a {
                    return Ok(None);
                }
                let (_, ing, want) =
                    recipe(t).ok_or_else(|| Error::UndefinedSemantics(format!("{t:?}")))?;
                let made = produced(prev, next);
                let pre = prev.eval(&t.pre)?;
                if made.iter().any(|&m| m != want) {
                    return Ok(Some((false, "other-output")));
                }
                if made.contains(&want) {
                    if !pre {
                        return Ok(Some((false, "output-without-pre")));
                    }
                    let held = held_ingredients(prev, &self.ingredients);
                    if held.len() == 1 && ing.is_some_and(|i| held.contains(i)) {
                        return Ok(Some((true, "pre-action-output")));
                    }
                    return Ok(None);
                }
                Ok(pre.then_some((false, "pre-action-no-output")))
            }
        }
    }

    fn cart_transition(
        &mut self,
        prev: &CartSnapshot,
        action: Action,
        next: &CartSnapshot,
    ) -> Found {
        if !matches!(action, Action::Left | Action::Right) {
            return None;
        }
        let p = &self.params;
        let obs_x = (next.cart.x_dot - prev.cart.x_dot) / p.tau;
        let obs_t = (next.cart.theta_dot - prev.cart.theta_dot) / p.tau;
        let push = push_force(p, action);
        let candidates = std::iter::once(None).chain(ZoneEffect::ALL.map(Some));
        let matches: Vec<Option<ZoneEffect>> = candidates
            .filter(|&cand| {
                let (force, g) = modified(p, push, cand);
                let (ax, at) = p.accelerations(&prev.cart, force, g);
                (ax - obs_x).abs() <= ACCEL_TOLERANCE && (at - obs_t).abs() <= ACCEL_TOLERANCE
            })
            .collect();
        let ([effect], Some(zone)) = (matches.as_slice(), prev.current_zone()) else {
            return None;
        };
        let n = self
            .zone_counts
            .entry((zone.to_string(), *effect))
            .or_insert(0);
        *n += 1;
        if *n < MIN_ZONE_STEPS {
            return None;
        }
        zone_evidence(self.claim, zone, *effect)
    }
}

fn negate(found: Found) -> Found {
    found.map(|(a, r)| (!a, r))
}

fn implies_state(t: &Triplet, g: &GridState) -> Result<Found> {
    if t.action != ActionSeq::Empty {
        return Ok(None);
    }
    let (pre, post) = (g.eval(&t.pre)?, g.eval(&t.post)?);
    Ok(match (pre, post) {
        (true, false) => Some((false, "pre-without-post")),
        (false, true) => Some((false, "post-without-pre")),
        _ => None,
    })
}

/// Verdict on "cause has no influence on effect" from one transition.
fn independence(
    cause: &Condition,
    effect: &Condition,
    prev: &GridState,
    next: &GridState,
) -> Result<Found> {
    let c = prev.eval(cause)? != next.eval(cause)?;
    let e = prev.eval(effect)? != next.eval(effect)?;
    Ok(match (c, e) {
        (true, true) => Some((false, "cause-and-effect-change-together")),
        (true, false) => Some((true, "cause-changes-alone")),
        (false, true) => Some((true, "effect-changes-alone")),
        (false, false) => None,
    })
}

/// What an identified effect inside `zone` says about a cart-pole claim.
fn zone_evidence(claim: &Claim, zone: &str, effect: Option<ZoneEffect>) -> Found {
    let independent = |cause: &Condition, kind: &Condition| -> Found {
        let (Condition::InZone(c), Condition::EffectOfKind(k)) = (cause, kind) else {
            return None;
        };
        match effect {
            Some(f) => Some((!(zone == c && f.kind() == *k), "zone-effect-identified")),
            None if zone == c => Some((true, "zone-inert")),
            None => None,
        }
    };
    let implies = |t: &Triplet| -> Found {
        let (Condition::InZone(c), Condition::Effect(e)) = (&t.pre, &t.post) else {
            return None;
        };
        match effect {
            Some(f) => Some((zone == c && f == *e, "zone-effect-identified")),
            None if zone == c => Some((false, "zone-inert")),
            None => None,
        }
    };
    match claim {
        Claim::Implies(t) => implies(t),
        Claim::NotImplies(t) => negate(implies(t)),
        Claim::Independent { cause, effect } => independent(cause, effect),
        Claim::Controls { cause, effect } => negate(independent(cause, effect)),
        Claim::Partial { .. } => None,
    }
}
