use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::evidence::Judge;
use super::{interpret, Claim};
use crate::cartpole::{CartState, CartpoleParams};
use crate::episode::WorldState;
use crate::error::{Error, Result};
use crate::grammar::{SemanticForm, TemplateLibrary};
use crate::gridworld::{Cell, GridState, Object};
use crate::world::{Layout, WorldInstance};
use crate::Action;

/// Default search depth in steps.
pub const SIMULATION_BUDGET: usize = 100;

/// Steps per cart-pole zone probe.
pub const PROBE_STEPS: usize = 10;

/// Probe starting angle, large enough for gravity to be measurable.
const PROBE_THETA: f64 = 0.05;

pub(crate) type GridKey = (Cell, Vec<Option<Object>>, BTreeSet<String>);

pub(crate) fn key(g: &GridState) -> GridKey {
    let held = g
        .inventory
        .iter()
        .filter(|(_, &n)| n > 0)
        .map(|(k, _)| k.clone())
        .collect();
    (g.agent, g.cells.clone(), held)
}

/// States and transitions reachable from a world's initial layout, reduced to
/// those that can carry evidence.
#[derive(Debug, Clone)]
pub struct Exploration {
    pub states: Vec<WorldState>,
    /// Indices of the states worth judging on their own.
    pub distinct: Vec<usize>,
    pub transitions: Vec<(usize, Action, usize)>,
    budget: usize,
}

impl Exploration {
    /// Breadth-first search over world actions up to `budget` steps for
    /// gridworlds; scripted probes at each zone center for cart-pole.
    pub fn explore(world: &WorldInstance, budget: usize) -> Exploration {
        match &world.layout {
            Layout::Grid(_) => Self::bfs(world, budget),
            Layout::Cart(c) => Self::probe(world, &c.zones, budget),
        }
    }

    fn bfs(world: &WorldInstance, budget: usize) -> Exploration {
        let law = &world.ruleset.law;
        let params = CartpoleParams::classic();
        let WorldState::Grid(start) = WorldState::initial(&world.layout, law) else {
            unreachable!("grid layout");
        };
        let mut index: HashMap<GridKey, usize> = HashMap::new();
        let mut states = vec![start.clone()];
        let mut depth = vec![0usize];
        let mut edges = Vec::new();
        index.insert(key(&start), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            if depth[i] >= budget {
                continue;
            }
            for &action in world.env_id.world_actions() {
                let mut next = WorldState::Grid(states[i].clone());
                next.apply(action, law, &params);
                let WorldState::Grid(next) = next else {
                    unreachable!()
                };
                let j = match index.get(&key(&next)) {
                    Some(&j) => j,
                    None => {
                        let j = states.len();
                        index.insert(key(&next), j);
                        states.push(next);
                        depth.push(depth[i] + 1);
                        queue.push_back(j);
                        j
                    }
                };
                edges.push((i, action, j));
            }
        }

        // Only non-agent state matters to the evidence rules: judge one state
        // per distinct item configuration and skip plain moves.
        let items: Vec<_> = states.iter().map(GridState::item_states).collect();
        let mut seen = HashSet::new();
        let distinct = (0..states.len())
            .filter(|&i| seen.insert(items[i].clone()))
            .collect();
        let transitions = edges
            .into_iter()
            .filter(|&(i, a, j)| a == Action::Craft || items[i] != items[j])
            .collect();
        Exploration {
            states: states.into_iter().map(WorldState::Grid).collect(),
            distinct,
            transitions,
            budget,
        }
    }

    fn probe(world: &WorldInstance, zones: &[crate::cartpole::Zone], budget: usize) -> Exploration {
        let law = &world.ruleset.law;
        let params = CartpoleParams::classic();
        let mut states = Vec::new();
        let mut transitions = Vec::new();
        for zone in zones {
            let cart = CartState {
                x: zone.center(),
                x_dot: 0.0,
                theta: PROBE_THETA,
                theta_dot: 0.0,
            };
            let mut s = WorldState::Cart(crate::cartpole::CartSnapshot::new(
                cart,
                zones.to_vec(),
                law,
            ));
            states.push(s.clone());
            for k in 0..PROBE_STEPS.min(budget) {
                let action = if k % 2 == 0 {
                    Action::Right
                } else {
                    Action::Left
                };
                s.apply(action, law, &params);
                states.push(s.clone());
                transitions.push((states.len() - 2, action, states.len() - 1));
            }
        }
        let distinct = (0..states.len()).collect();
        Exploration {
            states,
            distinct,
            transitions,
            budget,
        }
    }

    /// Settles `claim` from the explored evidence.
    pub fn judge(&self, lib: &TemplateLibrary, claim: &Claim) -> Result<bool> {
        let mut judge = Judge::new(lib, claim);
        for &i in &self.distinct {
            judge.state(&self.states[i])?;
            if judge.decided() {
                return Ok(judge.verdict().answer.expect("decided"));
            }
        }
        for &(i, a, j) in &self.transitions {
            judge.transition(&self.states[i], a, &self.states[j])?;
            if judge.decided() {
                break;
            }
        }
        judge
            .verdict()
            .answer
            .ok_or(Error::Indeterminate(self.budget))
    }
}

/// Decides `form` by exercising the world's dynamics, without consulting the
/// ground-truth function.
pub fn truth_by_simulation(
    lib: &TemplateLibrary,
    form: &SemanticForm,
    world: &WorldInstance,
    budget: usize,
) -> Result<bool> {
    if lib.env_id() != world.env_id {
        return Err(Error::EnvMismatch);
    }
    let claim = interpret(lib, form)?;
    Exploration::explore(world, budget).judge(lib, &claim)
}
