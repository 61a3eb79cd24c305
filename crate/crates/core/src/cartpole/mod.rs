//! Classic cart-pole with colored track zones that alter gravity or add wind.

mod physics;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grammar::TemplateLibrary;
use crate::truth::{Condition, ZoneEffect};
use crate::world::Law;
use crate::Action;

pub use physics::{CartState, CartpoleParams};

pub const ZONE_WIDTH: f64 = 0.8;
pub const TRACK_HALF: f64 = 2.4;
pub const SEGMENTS: usize = 12;

/// A colored interval `[lo, hi)` of the track.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Zone {
    pub color: String,
    pub lo: f64,
    pub hi: f64,
}

impl Zone {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x < self.hi
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Initial cart-pole layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartLayout {
    pub zones: Vec<Zone>,
    pub init: CartState<f64>,
}

/// Full cart-pole state. `effect` is the modification felt at the current
/// position; it derives from the hidden law and never enters observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartSnapshot {
    pub cart: CartState<f64>,
    pub zones: Vec<Zone>,
    pub effect: Option<ZoneEffect>,
}

/// The modification `law` applies at position `x`.
pub fn effect_at(law: &Law, zones: &[Zone], x: f64) -> Option<ZoneEffect> {
    let Law::Zone { color, effect } = law else {
        return None;
    };
    zones
        .iter()
        .any(|z| &z.color == color && z.contains(x))
        .then_some(*effect)
}

/// Signed push force of a cart action.
pub fn push_force(params: &CartpoleParams<f64>, action: Action) -> f64 {
    match action {
        Action::Left => -params.force_mag,
        Action::Right => params.force_mag,
        _ => 0.0,
    }
}

/// `(net force, gravity)` felt under `effect`.
pub fn modified(params: &CartpoleParams<f64>, push: f64, effect: Option<ZoneEffect>) -> (f64, f64) {
    match effect {
        None => (push, params.gravity),
        Some(ZoneEffect::Gravity(g)) => (push, params.gravity * g.factor()),
        Some(ZoneEffect::Wind(w)) => (push + params.wind * w.sign(), params.gravity),
    }
}

impl CartSnapshot {
    pub fn new(cart: CartState<f64>, zones: Vec<Zone>, law: &Law) -> CartSnapshot {
        let effect = effect_at(law, &zones, cart.x);
        CartSnapshot {
            cart,
            zones,
            effect,
        }
    }

    pub fn zone(&self, color: &str) -> Option<&Zone> {
        self.zones.iter().find(|z| z.color == color)
    }

    /// Color of the zone holding the cart, if any.
    pub fn current_zone(&self) -> Option<&str> {
        self.zones
            .iter()
            .find(|z| z.contains(self.cart.x))
            .map(|z| z.color.as_str())
    }

    /// Advances one step; the effect is decided by the position before the step.
    pub fn advance(&self, params: &CartpoleParams<f64>, action: Action, law: &Law) -> CartSnapshot {
        let (force, g) = modified(params, push_force(params, action), self.effect);
        let cart = params.integrate(&self.cart, force, g);
        CartSnapshot::new(cart, self.zones.clone(), law)
    }

    pub fn eval(&self, cond: &Condition) -> Result<bool> {
        match cond {
            Condition::InZone(color) => self
                .zone(color)
                .map(|z| z.contains(self.cart.x))
                .ok_or_else(|| Error::MissingEntity(format!("{color} zone"))),
            Condition::Effect(e) => Ok(self.effect == Some(*e)),
            Condition::EffectOfKind(k) => Ok(self.effect.is_some_and(|e| e.kind() == *k)),
            Condition::All(cs) => {
                let mut all = true;
                for c in cs {
                    all &= self.eval(c)?;
                }
                Ok(all)
            }
            _ => Err(Error::EnvMismatch),
        }
    }
}

/// Dynamics 4-vector, a (segment × color) zone map and a per-color
/// membership indicator.
#[derive(Debug, Clone)]
pub struct CartEncoder {
    colors: Vec<String>,
}

impl CartEncoder {
    pub fn new(lib: &TemplateLibrary) -> CartEncoder {
        CartEncoder {
            colors: lib.domain("COLOR").to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        4 + SEGMENTS * self.colors.len() + self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn encode(&self, s: &CartSnapshot) -> Vec<f64> {
        let n = self.colors.len();
        let mut out = Vec::with_capacity(self.len());
        out.extend_from_slice(&s.cart.to_array());
        let seg_width = 2.0 * TRACK_HALF / SEGMENTS as f64;
        let mut map = vec![0.0; SEGMENTS * n];
        let mut inside = vec![0.0; n];
        for zone in &s.zones {
            let Some(ci) = self.colors.iter().position(|c| *c == zone.color) else {
                continue;
            };
            for seg in 0..SEGMENTS {
                let center = -TRACK_HALF + (seg as f64 + 0.5) * seg_width;
                if zone.contains(center) {
                    map[seg * n + ci] = 1.0;
                }
            }
            if zone.contains(s.cart.x) {
                inside[ci] = 1.0;
            }
        }
        out.extend(map);
        out.extend(inside);
        out
    }
}
