use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use rand::RngCore;

use super::{Agent, OraclePredictor};
use crate::cartpole::CartState;
use crate::episode::{Episode, WorldState};
use crate::error::Result;
use crate::grammar::TemplateLibrary;
use crate::truth::{grid_key, Claim, Condition, GridKey, Judge};
use crate::Action;

/// Shortest sequence of world actions after which the window settles the
/// claim, found by breadth-first search over the true simulator. `None` when
/// nothing within the remaining horizon settles it.
pub fn oracle_plan(
    lib: &TemplateLibrary,
    claim: &Claim,
    ep: &Episode,
) -> Result<Option<Vec<Action>>> {
    let mut judge = Judge::new(lib, claim);
    for frame in ep.window() {
        judge.state(&frame.state)?;
    }
    if judge.decided() {
        return Ok(Some(Vec::new()));
    }
    let WorldState::Grid(start) = ep.state() else {
        return Ok(None);
    };
    // Leave one step for the answer.
    let max_depth = ep.config().horizon.saturating_sub(ep.t() + 1);
    let law = &ep.world().ruleset.law;
    let mut states = vec![(start.clone(), None::<(usize, Action)>, 0usize)];
    let mut seen: HashMap<GridKey, usize> = HashMap::from([(grid_key(start), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let depth = states[i].2;
        if depth >= max_depth {
            continue;
        }
        for &action in ep.env_id().world_actions() {
            let mut next = states[i].0.clone();
            next.apply(action, law);
            let (prev, next) = (
                WorldState::Grid(states[i].0.clone()),
                WorldState::Grid(next),
            );
            let mut judge = Judge::new(lib, claim);
            judge.state(&next)?;
            judge.transition(&prev, action, &next)?;
            let WorldState::Grid(next) = next else {
                unreachable!()
            };
            if judge.decided() {
                let mut plan = vec![action];
                let mut at = i;
                while let Some((parent, a)) = states[at].1 {
                    plan.push(a);
                    at = parent;
                }
                plan.reverse();
                return Ok(Some(plan));
            }
            if let Entry::Vacant(slot) = seen.entry(grid_key(&next)) {
                slot.insert(states.len());
                queue.push_back(states.len());
                states.push((next, Some((i, action)), depth + 1));
            }
        }
    }
    Ok(None)
}

/// Feedback gains from a linear-quadratic design on the linearised cart-pole.
const GAINS: [f64; 4] = [3.162, 5.915, 49.507, 12.844];

/// Bang-bang balancing controller that drifts the cart toward `target`.
pub fn cart_controller(s: &CartState<f64>, target: f64) -> Action {
    let [kx, kv, kt, kw] = GAINS;
    let u = kx * (s.x - target) + kv * s.x_dot + kt * s.theta + kw * s.theta_dot;
    if u > 0.0 {
        Action::Right
    } else {
        Action::Left
    }
}

/// Scripted verifier: gathers decisive evidence, then answers through the
/// oracle predictor.
#[derive(Debug)]
pub struct OracleAgent<'a> {
    predictor: OraclePredictor<'a>,
    plan: VecDeque<Action>,
    target: Option<f64>,
    infeasible: bool,
}

fn zone_color(claim: &Claim) -> Option<&str> {
    claim.conditions().into_iter().find_map(|c| match c {
        Condition::InZone(color) => Some(color.as_str()),
        _ => None,
    })
}

impl<'a> OracleAgent<'a> {
    pub fn new(lib: &'a TemplateLibrary, ep: &Episode) -> Result<Self> {
        let predictor = OraclePredictor::new(lib, &ep.world().visible)?;
        let mut agent = OracleAgent {
            plan: VecDeque::new(),
            target: None,
            infeasible: false,
            predictor,
        };
        match ep.state() {
            WorldState::Grid(_) => match oracle_plan(lib, agent.predictor.claim(), ep)? {
                Some(plan) => agent.plan = plan.into(),
                None => agent.infeasible = true,
            },
            WorldState::Cart(c) => {
                agent.target = zone_color(agent.predictor.claim())
                    .and_then(|color| c.zone(color))
                    .map(|z| z.center());
            }
        }
        Ok(agent)
    }

    fn answer(&self, ep: &Episode) -> Result<Action> {
        let verdict = self.predictor.predict(ep.window())?;
        Ok(Action::from_answer(verdict.answer.unwrap_or(true)))
    }
}

impl Agent for OracleAgent<'_> {
    fn act(&mut self, ep: &Episode, _rng: &mut dyn RngCore) -> Result<Action> {
        match ep.state() {
            WorldState::Grid(_) => match self.plan.pop_front() {
                Some(a) => Ok(a),
                None => self.answer(ep),
            },
            WorldState::Cart(c) => {
                if self.predictor.predict(ep.window())?.answer.is_some() {
                    return self.answer(ep);
                }
                if ep.t() + 1 >= ep.config().horizon || self.target.is_none() {
                    self.infeasible = true;
                    return self.answer(ep);
                }
                Ok(cart_controller(&c.cart, self.target.unwrap_or(0.0)))
            }
        }
    }

    fn infeasible(&self) -> bool {
        self.infeasible
    }

    fn after_step(&mut self, ep: &Episode) {
        if ep.done() && ep.answer().is_none() {
            self.infeasible = true;
        }
    }
}
