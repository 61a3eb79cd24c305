use std::collections::BTreeSet;

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Entity, Law, Layout, RuleSet, WorldInstance};
use crate::cartpole::{CartLayout, CartState, Zone, TRACK_HALF, ZONE_WIDTH};
use crate::error::{Error, Result};
use crate::grammar::{Hypothesis, KindMix, SemanticForm, TemplateLibrary};
use crate::gridworld::{GridState, Object, DOOR_CELL, GRID_SIZE};
use crate::truth::{ground_truth, interpret, Claim, Condition};
use crate::EnvId;

/// Rejection-sampling attempts before giving up.
pub const RETRY_BUDGET: usize = 100;

/// Builds a law consistent with `form`, drawn uniformly among all such laws.
pub fn ruleset_from_hypothesis<R: Rng + ?Sized>(
    lib: &TemplateLibrary,
    form: &SemanticForm,
    rng: &mut R,
) -> Result<RuleSet> {
    let claim = interpret(lib, form)?;
    let laws: Vec<Law> = Law::enumerate(lib)
        .into_iter()
        .filter(|l| matches!(ground_truth(&claim, l), Ok(true)))
        .collect();
    laws.choose(rng).cloned().map(RuleSet::new).ok_or_else(|| {
        Error::Unsatisfiable(lib.instantiate(form).map(|h| h.text).unwrap_or_default())
    })
}

/// Draws from `mix` until a hypothesis is false under `ruleset` and differs
/// from `avoid`.
pub fn sample_false_hypothesis<R: Rng + ?Sized>(
    lib: &TemplateLibrary,
    ruleset: &RuleSet,
    mix: KindMix,
    avoid: &str,
    rng: &mut R,
) -> Result<Hypothesis> {
    for _ in 0..RETRY_BUDGET {
        let h = lib.sample(mix, rng)?;
        if h.text == avoid {
            continue;
        }
        let claim = interpret(lib, &h.form)?;
        if matches!(ground_truth(&claim, &ruleset.law), Ok(false)) {
            return Ok(h);
        }
    }
    Err(Error::RetryBudget {
        what: "drawing a false hypothesis",
        budget: RETRY_BUDGET,
        seed: 0,
    })
}

fn mentioned(lib: &TemplateLibrary, claim: &Claim, out: &mut BTreeSet<Entity>) {
    let ingredients = lib.domain("CRAFTING_ITEM");
    for cond in claim.conditions() {
        match cond {
            Condition::SwitchIs { color, .. } => {
                out.insert(Entity::Switch(color.clone()));
            }
            Condition::DoorOpen => {
                out.insert(Entity::Door);
            }
            Condition::BlockIn(_) => {
                out.insert(Entity::Block);
            }
            Condition::At(loc) => {
                out.insert(Entity::Station(loc.clone()));
            }
            Condition::Has(item) if ingredients.contains(item) => {
                out.insert(Entity::Item(item.clone()));
            }
            Condition::InZone(color) => {
                out.insert(Entity::Zone(color.clone()));
            }
            _ => {}
        }
    }
}

/// Every entity to spawn: those mentioned by either hypothesis, the law's
/// causal entity and the fixed furniture of the environment.
fn entities(
    lib: &TemplateLibrary,
    ruleset: &RuleSet,
    hyps: [&Hypothesis; 2],
) -> Result<BTreeSet<Entity>> {
    let mut out = BTreeSet::new();
    for h in hyps {
        mentioned(lib, &interpret(lib, &h.form)?, &mut out);
    }
    out.insert(ruleset.causal_entity());
    match &ruleset.law {
        Law::Switch { .. } | Law::Block(_) => {
            out.insert(Entity::Door);
        }
        Law::Recipe { location, .. } => {
            out.insert(Entity::Station(location.clone()));
        }
        Law::Zone { .. } => {}
    }
    Ok(out)
}

/// Places the agent and every entity mentioned in either hypothesis.
pub fn spawn_layout<R: Rng + ?Sized>(
    lib: &TemplateLibrary,
    ruleset: &RuleSet,
    true_h: &Hypothesis,
    false_h: &Hypothesis,
    rng: &mut R,
) -> Result<Layout> {
    let entities = entities(lib, ruleset, [true_h, false_h])?;
    if lib.env_id() == EnvId::Cartpole {
        return Ok(Layout::Cart(spawn_zones(&entities, rng)?));
    }

    let has_door = entities.contains(&Entity::Door);
    let free: Vec<usize> = (0..GRID_SIZE * GRID_SIZE)
        .filter(|&i| !(has_door && GridState::cell_of(i) == DOOR_CELL))
        .collect();
    let placed: Vec<&Entity> = entities.iter().filter(|e| **e != Entity::Door).collect();
    let needed = placed.len() + 1;
    if needed > free.len() {
        return Err(Error::GridOverfull {
            entities: needed,
            cells: free.len(),
        });
    }
    let picks = index::sample(rng, free.len(), needed).into_vec();
    let mut grid = GridState::new(GridState::cell_of(free[picks[0]]));
    if has_door {
        grid.put(DOOR_CELL, Object::Door { open: false });
    }
    for (entity, &p) in placed.iter().zip(&picks[1..]) {
        let cell = GridState::cell_of(free[p]);
        let object = match entity {
            Entity::Switch(color) => Object::Switch {
                color: color.clone(),
                on: false,
            },
            Entity::Block => Object::Block,
            Entity::Item(name) => Object::Item(name.clone()),
            Entity::Station(name) => Object::Station(name.clone()),
            Entity::Door | Entity::Zone(_) => return Err(Error::EnvMismatch),
        };
        grid.put(cell, object);
    }
    for slot in grid.cells.iter_mut().flatten() {
        if let Object::Switch { on, .. } = slot {
            *on = rng.gen_bool(0.5);
        }
    }
    grid.refresh_door(&ruleset.law);
    Ok(Layout::Grid(grid))
}

fn spawn_zones<R: Rng + ?Sized>(entities: &BTreeSet<Entity>, rng: &mut R) -> Result<CartLayout> {
    let mut colors: Vec<String> = entities
        .iter()
        .filter_map(|e| match e {
            Entity::Zone(c) => Some(c.clone()),
            _ => None,
        })
        .collect();
    let n = colors.len();
    let slack = 2.0 * TRACK_HALF - ZONE_WIDTH * n as f64;
    if slack < 0.0 {
        return Err(Error::GridOverfull {
            entities: n,
            cells: (2.0 * TRACK_HALF / ZONE_WIDTH) as usize,
        });
    }
    // Sorted uniform offsets in the slack, each zone shifted past its
    // predecessors, give a uniform non-overlapping placement.
    let mut offsets: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=slack)).collect();
    offsets.sort_by(f64::total_cmp);
    colors.shuffle(rng);
    let zones = colors
        .into_iter()
        .zip(offsets)
        .enumerate()
        .map(|(i, (color, u))| {
            let lo = -TRACK_HALF + u + ZONE_WIDTH * i as f64;
            Zone {
                color,
                lo,
                hi: lo + ZONE_WIDTH,
            }
        })
        .collect();
    let mut init = [0.0; 4];
    for v in &mut init {
        *v = rng.gen_range(-0.05..=0.05);
    }
    Ok(CartLayout {
        zones,
        init: CartState::from_array(init),
    })
}

/// Samples a world from `seed`.
pub fn sample_world(lib: &TemplateLibrary, mix: KindMix, seed: u64) -> Result<WorldInstance> {
    sample_world_with(lib, mix, seed, None)
}

/// As [`sample_world`], optionally forcing which hypothesis is shown. The
/// visibility coin is drawn either way so every other draw is unchanged.
pub fn sample_world_with(
    lib: &TemplateLibrary,
    mix: KindMix,
    seed: u64,
    force_visible: Option<bool>,
) -> Result<WorldInstance> {
    let with_seed = |e: Error| match e {
        Error::RetryBudget { what, budget, .. } => Error::RetryBudget { what, budget, seed },
        other => other,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut drawn = None;
    for _ in 0..RETRY_BUDGET {
        let h = lib.sample(mix, &mut rng)?;
        match ruleset_from_hypothesis(lib, &h.form, &mut rng) {
            Ok(rs) => {
                drawn = Some((h, rs));
                break;
            }
            Err(Error::Unsatisfiable(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let (hidden_true, mut ruleset) = drawn.ok_or(Error::RetryBudget {
        what: "drawing a satisfiable hypothesis",
        budget: RETRY_BUDGET,
        seed,
    })?;
    let hidden_false = sample_false_hypothesis(lib, &ruleset, mix, &hidden_true.text, &mut rng)
        .map_err(with_seed)?;

    let causal = ruleset.causal_entity();
    ruleset.decoys = entities(lib, &ruleset, [&hidden_true, &hidden_false])?
        .into_iter()
        .filter(|e| *e != causal && *e != Entity::Door && !matches!(e, Entity::Station(_)))
        .collect();
    let layout = spawn_layout(lib, &ruleset, &hidden_true, &hidden_false, &mut rng)?;

    let coin = rng.gen_bool(0.5);
    let label = force_visible.unwrap_or(coin);
    let visible = if label {
        hidden_true.clone()
    } else {
        hidden_false.clone()
    };
    Ok(WorldInstance {
        env_id: lib.env_id(),
        ruleset,
        layout,
        visible,
        label,
        hidden_true,
        hidden_false,
        seed,
    })
}
